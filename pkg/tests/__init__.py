"""Test modules for rgbd_encodings"""
