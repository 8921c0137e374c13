"""Small-diameter strong orientations of bridgeless graphs."""
