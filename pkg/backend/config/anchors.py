#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Identity strings quoted in verification reports.

Each check of a suite carries one of these as its ``anchor``, so a report
line states which identity was evaluated.
"""

# Isometry of boundary pairs
GREEN = "Yh^H J_Gamma Xh = H^H Y^H L"
DOMAIN_B = "dom GammaB = B^c"
DOMAIN_A = "dom GammaA = A^c"
ADJOINT_B = "(GammaB)^c = (Y GammaB_#)^{-1}"
ADJOINT_A = "(GammaA)^c = (Y^{-1} GammaA_#)^{-1}"

# Weyl families and gamma fields
GAMMA_DIFFERENCE = "gamma(lam) - gamma(lam0) = P phi(lam)(lam - lam0) gamma(lam0)"
WEYL_DIFFERENCE = "M(lam) - M(lam0) = GammaB_10 phi(lam)(lam - lam0) gamma(lam0)"
GAMMA_ADJOINT = "GammaB_10 phi(lam) <= gamma_A(conj lam)^c"
WEYL_SYMMETRY = "M_B(lam)^* = GammaB_#(conj lam I)"
NEVANLINNA = "Im M(lam) / Im lam >= 0"
Q_FUNCTION = "M_B(lam) = P_N (T - lam)^{-1} | N"

# Krein resolvent formula
RESOLVENT = "(A_theta - lam)^{-1} = (A0 - lam)^{-1} + gamma(lam)(theta - M(lam))^{-1} GammaB_10 phi(lam)"
EIGEN_CRITERIA = "lam in sigma_p(A_theta) <=> Ker(theta - M(lam)) outside mul GammaB_0"

# Coupling
DECOUPLE = "slices of Gamma = (GammaB, GammaA)"
BLOCK_DOMAIN = "dom Gamma = diag(dom GammaB, dom GammaA)"
BLOCK_KERNEL = "Ker Gamma = diag(Ker GammaB, Ker GammaA)"
BLOCK_RANGE = "ran Gamma = antidiag(ran GammaA, ran GammaB)"
BLOCK_MUL = "mul Gamma = antidiag(mul GammaA, mul GammaB)"
T_NEUTRAL = "T = diag(A, B) is neutral"
T_ADJOINT = "T^c = diag(B^c, A^c)"
SHARP_SHAPE = "(Gamma^c)^{-1} = coupling of (GammaA_#, GammaB_#)"
COUPLED_WEYL = "M_Gamma(lam) = antidiag(M_A(lam), M_B(lam))"
WEYL_LINK = "M_A(lam) = M_B(conj lam)^*"
DEFECT = "Ker(J T^c -+ i) = +-i((J A^c)^{-1} & -J B^c)"
LADDER = "(G, Gamma) rung <=> (GammaB, GammaA) rung"

# Similarity and unitary equivalence
SIMILARITY = "GammaB' = GammaB U~^{-1}"
UNIT = "(GammaB)^{-1} GammaB' = (GammaA)^{-1} GammaA'"
UNITP = "(GammaB)^{-1} GammaB' is a unitary relation"
WEYL_MATCH = "M_B(lam) = M_B'(lam)"
STANDARD_UNITARY = "U^c U = I and U U^c = I"
E_MAP = "GammaA (GammaB)^{-1} = [GammaB (GammaB)^c Y]^{-1}"

# Fractional linear transforms
FLT_WEYL = "W(Mdot(lam)) = C + K^*(B - Mdot(lam))^{-1} K"
FLT_PAIR = "W W^c (M_A) = {(Phi h, Psi h)}"
X_IDENTITY = "B^* - M = (B - M)^*(I - X(lam))"
SYS_V = "compatibility system <=> V standard unitary"
THETA_PRIME = "theta' = B' + K'[Re(C' - C) + K^*(theta - B)^{-1} K]^{-1} K'^*"
MATCHED_WEYL = "C + K^*(B - Mdot)^{-1} K = C' + K'^*(B' - Mdot')^{-1} K'"
KERNEL_A0 = "U~ Ker(Gdot_1 - B Gdot_0) = Ker(Gdot'_1 - B' Gdot'_0)"
KERNEL_0 = "U~ Ker Gdot_0 = Ker Gdot'_0 <=> C = C'"
RING_WEYL = "M_ring(lam) = K^*(Re B - Mdot(lam))^{-1} K"

# D-boundary triples and Pontryagin classes
DBT = "GammaA = E GammaB"
DBT_PAIR = "{(Phi l, Psi l)} = M_B(lam)"
DBT_CLOSED = "M_B(lam) = P1 (M_A(lam)^{-1} - i E2)^{-1}"
LP_CLASS = "maximal negative subspace inside dom A"
SIMPLICITY = "defect spans beyond the half-plane bound = generic defect spans"
REAL_REGULAR = "real points of regular type are resolvent points"

# Registry keyed by check id
ANCHORS = {name.lower(): value for name, value in dict(globals()).items() if name.isupper() and isinstance(value, str)}
