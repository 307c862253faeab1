"""Models and schemas used in this package"""
