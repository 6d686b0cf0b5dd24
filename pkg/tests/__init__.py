# Test package for the Reward Peak Explainer
