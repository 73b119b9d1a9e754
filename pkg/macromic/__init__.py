#!/usr/bin/env python3
"""Quantify how macroscopic a quantum superposition is with respect to a fixed observable."""

__version__ = '1.0.0'
