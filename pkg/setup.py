#!/usr/bin/env python3
"""
Setup script for the population-protocol leader-election simulator

This file is maintained for backward compatibility.
Modern packaging configuration is in pyproject.toml
"""

from setuptools import setup

setup()
