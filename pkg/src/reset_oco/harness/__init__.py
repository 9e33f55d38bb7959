"""Experiment harness: environments, runs, outputs and the CLI."""
