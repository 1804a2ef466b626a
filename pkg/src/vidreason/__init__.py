"""Procedural visual-reasoning task pairs for video-generation models:
generators, inference pipeline, judging, agreement statistics, and a human
annotation service.
"""

__version__ = "0.1.0"
