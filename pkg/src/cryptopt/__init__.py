"""
cryptopt
European options on cryptocurrency futures under Black-Scholes, Merton jump
diffusion, Variance Gamma, Kou, Heston and Bates: pricing, per-maturity
calibration, pricing-error metrics and a Monte Carlo oracle
"""

__version__ = "1.0.0"
