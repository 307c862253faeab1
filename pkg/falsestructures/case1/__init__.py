"""Interval problem: f_a, stable region, generators and the analytic stable network"""
