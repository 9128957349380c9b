"""Covering densities of quarter-convex disks via inscribed stair polygons."""
