"""RGBD Encodings - stereo disparity and depth feature channels for off-road segmentation."""

__version__ = "0.1.0"
