from pydantic.dataclasses import dataclass


@dataclass
class CollisionUsage:
    steps: int = 0
    """Collision substeps taken."""

    candidates: int = 0
    """Candidate pairs drawn by the no-time-counter scheme."""

    collisions: int = 0
    """Candidate pairs accepted and collided."""

    majorant_retries: int = 0
    """Substeps repeated after a rate exceeded the majorant."""

    def add(self, other: "CollisionUsage") -> None:
        self.steps += other.steps if other.steps else 0
        self.candidates += other.candidates if other.candidates else 0
        self.collisions += other.collisions if other.collisions else 0
        self.majorant_retries += other.majorant_retries if other.majorant_retries else 0

    @property
    def acceptance(self) -> float:
        """Fraction of candidates accepted."""
        return self.collisions / self.candidates if self.candidates else 0.0
