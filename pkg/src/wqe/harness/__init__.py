"""Campaigns, counterexample search, result files and reports."""

from .campaign import CampaignError, CampaignSummary, InstanceRunner, iter_records, run_campaign
from .config import CampaignConfig, ConfigError, SearchSpec, default_dims, parse_dims, worker_count
from .ensembles import ENSEMBLES, SPECS
from .records import RecordError, read_matrix, write_matrix
from .report import Report, summarize, summarize_lines
from .search import TARGETS, SearchOutcome, search_counterexample

__all__ = [
    "CampaignConfig", "CampaignError", "CampaignSummary", "ConfigError", "ENSEMBLES",
    "InstanceRunner", "RecordError", "Report", "SPECS", "SearchOutcome", "SearchSpec",
    "TARGETS", "default_dims", "iter_records", "parse_dims", "read_matrix", "run_campaign",
    "search_counterexample", "summarize", "summarize_lines", "worker_count", "write_matrix",
]
