"""Frobenius fields of genus-2 Jacobians modulo primes."""
