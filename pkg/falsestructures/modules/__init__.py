"""Experiment modules"""
