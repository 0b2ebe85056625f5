"""Jacobian syzygies, Milnor algebra resolutions and generic toric models."""
