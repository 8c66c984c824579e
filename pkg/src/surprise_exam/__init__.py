"""Mechanized surprise-examination paradox: self-reference, epistemic logic,
iterated games and surprise-maximizing schedules."""

__version__ = "0.1.0"
