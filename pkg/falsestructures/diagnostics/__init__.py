"""False structure verification, severity, attribution and perturbation probes"""
