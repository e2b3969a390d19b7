"""Validation utilities for couplings, perturbations and field pairs"""
from app.validation.coupling_validator import CouplingValidator

__all__ = ['CouplingValidator']
