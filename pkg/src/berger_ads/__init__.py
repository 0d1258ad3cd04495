"""Berger-type Lorentzian structures on the universal cover of anti-de Sitter space."""
