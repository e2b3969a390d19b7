"""Run orchestration and result persistence"""
from app.state.experiment_runner import COLUMNS, ExperimentRunner
from app.state.result_writer import ResultWriter

__all__ = ["COLUMNS", "ExperimentRunner", "ResultWriter"]
