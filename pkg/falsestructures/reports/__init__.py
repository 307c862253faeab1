"""CSV, manifest and image artifacts"""
