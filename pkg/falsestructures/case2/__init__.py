"""Stripe images: colour codes, labelers, generators and the CNN"""
