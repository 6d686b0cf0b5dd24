"""
Reward Peak Explainer
Peak-based value functions and explanations for deterministic MDPs
"""

__version__ = "1.0.0"
__author__ = "Reward Peak Explainer Team"
__description__ = "Peak-based value functions and explanations for deterministic MDPs"
