# Instance File Package
