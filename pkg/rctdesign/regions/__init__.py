# regions package: bootstrap rectangles, ellipse fit, confidence regions
from rctdesign.regions.bootstrap import (
    ReplicateRectangle,
    bootstrap_rectangles,
    mean_confidence_intervals,
    point_estimate,
)
from rctdesign.regions.ellipse import Ellipse, min_volume_ellipse, rectangle_radii, shrink_to_coverage
from rctdesign.regions.projection import project_onto_box, project_onto_ellipse, project_onto_region
from rctdesign.regions.region import (
    RegionBuild,
    VarianceRegion,
    build_region,
    build_region_with_rectangles,
    build_regions,
    contains,
    region_from_rectangles,
)

__all__ = [
    "Ellipse",
    "RegionBuild",
    "ReplicateRectangle",
    "VarianceRegion",
    "bootstrap_rectangles",
    "build_region",
    "build_region_with_rectangles",
    "build_regions",
    "contains",
    "mean_confidence_intervals",
    "min_volume_ellipse",
    "point_estimate",
    "project_onto_box",
    "project_onto_ellipse",
    "project_onto_region",
    "rectangle_radii",
    "region_from_rectangles",
    "shrink_to_coverage",
]
