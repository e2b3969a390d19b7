"""Tests for the coupled NLS toolkit"""
