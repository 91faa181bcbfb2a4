"""Artifact emission"""

from .artifact_writer import ArtifactWriter, LabResult

__all__ = ["ArtifactWriter", "LabResult"]
