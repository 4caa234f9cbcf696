#!/usr/bin/env python3
"""
Krein Boundary Toolkit - Campaign Launcher
Generates seeded instances of every kind and runs all verification suites.

Usage:
    ./start.py                      # CAMPAIGN_INSTANCES per kind, DATA_DIR from .env
    ./start.py --instances 20 --dim 3
    ./start.py --kinds qsc flt --seed 100
"""

import argparse
import json
import signal
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

# Add backend to path
sys.path.insert(0, str(Path(__file__).parent / "backend"))

from config.settings import CAMPAIGN_INSTANCES, CAMPAIGN_WORKERS, DATA_DIR, default_grid, default_tol  # noqa: E402
from core.errors import KreinToolkitError  # noqa: E402
from main import configure_logging  # noqa: E402
from services.generators import KINDS, random_instance  # noqa: E402
from services.suites import run_suite  # noqa: E402
from transports.instance.codec import encode_report, read_instance, write_instance  # noqa: E402


class CampaignLauncher:
    def __init__(self, kinds, instances, dim, seed, data_dir):
        self.kinds = kinds
        self.instances = instances
        self.dim = dim
        self.seed = seed
        self.data_dir = Path(data_dir)
        self.tol = default_tol()
        self.grid = default_grid()
        self.stop = threading.Event()
        self.results = []

    def log(self, message, level="INFO"):
        colors = {
            "INFO": "\033[94m",
            "OK": "\033[92m",
            "WARN": "\033[93m",
            "ERROR": "\033[91m",
            "RESET": "\033[0m",
        }
        timestamp = time.strftime("%H:%M:%S")
        print(f"{colors.get(level, '')}{timestamp} [{level}] {message}{colors['RESET']}")

    def generate(self, kind, seed):
        """Write one instance file and return its path."""
        path = self.data_dir / "instances" / kind / f"{kind}-{self.dim}-{seed}.json"
        write_instance(path, random_instance(kind, self.dim, seed), self.tol)
        return path

    def verify(self, kind, seed):
        if self.stop.is_set():
            return None
        label = f"{kind}/{self.dim}/{seed}"
        try:
            path = self.generate(kind, seed)
            report = run_suite("all", read_instance(path), self.grid, self.tol, label=label)
        except KreinToolkitError as e:
            self.log(f"{label}: {type(e).__name__}: {e}", "ERROR")
            return {"instance": label, "passed": False, "error": str(e)}
        target = self.data_dir / "reports" / kind / f"{path.stem}.report.json"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(encode_report(report), indent=2), encoding="utf-8")
        if not report.passed:
            failed = ", ".join(sorted({c.check for c in report.checks if not c.passed}))
            self.log(f"{label}: failed {failed}", "WARN")
        return {"instance": label, "passed": report.passed, "max_residual": report.max_residual}

    def run_kind(self, kind):
        self.log(f"{kind}: {self.instances} instance(s), dim={self.dim}")
        seeds = range(self.seed, self.seed + self.instances)
        with ThreadPoolExecutor(max_workers=CAMPAIGN_WORKERS) as pool:
            results = [r for r in pool.map(lambda s: self.verify(kind, s), seeds) if r is not None]
        passed = sum(r["passed"] for r in results)
        worst = max((r.get("max_residual") or 0.0 for r in results), default=0.0)
        level = "OK" if passed == len(results) else "ERROR"
        self.log(f"{kind}: {passed}/{len(results)} passed, max residual {worst:.2e}", level)
        self.results.extend(results)

    def summary(self):
        failed = [r["instance"] for r in self.results if not r["passed"]]
        summary = {
            "instances": len(self.results),
            "failed": failed,
            "passed": not failed and not self.stop.is_set(),
        }
        self.data_dir.mkdir(parents=True, exist_ok=True)
        (self.data_dir / "campaign.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")
        return summary

    def run(self):
        """Main entry point."""
        print("\n" + "=" * 50)
        print("Krein Boundary Toolkit - verification campaign")
        print("=" * 50 + "\n")

        # Handle CTRL+C
        def signal_handler(sig, frame):
            self.log("Stopping after the running instances...", "WARN")
            self.stop.set()

        signal.signal(signal.SIGINT, signal_handler)
        signal.signal(signal.SIGTERM, signal_handler)

        for kind in self.kinds:
            if self.stop.is_set():
                break
            self.run_kind(kind)

        summary = self.summary()
        if summary["passed"]:
            self.log(f"All {summary['instances']} instances passed", "OK")
            return 0
        self.log(f"{len(summary['failed'])} of {summary['instances']} instances failed", "ERROR")
        return 1


def main():
    parser = argparse.ArgumentParser(description="Run every verification suite over seeded instances")
    parser.add_argument("--kinds", nargs="+", choices=KINDS, default=list(KINDS))
    parser.add_argument("--instances", type=int, default=CAMPAIGN_INSTANCES)
    parser.add_argument("--dim", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--data-dir", default=DATA_DIR)
    args = parser.parse_args()

    configure_logging("WARNING")
    launcher = CampaignLauncher(args.kinds, args.instances, args.dim, args.seed, args.data_dir)
    sys.exit(launcher.run())


if __name__ == "__main__":
    main()
