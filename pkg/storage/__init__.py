from .files import FileReportStore
from .interfaces import AggregateResult, ExceedancePoint, MetricReport, QueryReport, ReportStore

__all__ = [
    "FileReportStore",
    "ReportStore",
    "MetricReport",
    "QueryReport",
    "ExceedancePoint",
    "AggregateResult",
]
