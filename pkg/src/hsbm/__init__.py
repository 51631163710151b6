from .generator import (
    GroundTruth,
    HsbmSpec,
    SizeDistribution,
    draw_sizes,
    dumps_spec,
    generate,
    load_spec,
    planted_partition,
    split_children,
)

__all__ = [
    "GroundTruth",
    "HsbmSpec",
    "SizeDistribution",
    "draw_sizes",
    "dumps_spec",
    "generate",
    "load_spec",
    "planted_partition",
    "split_children",
]
