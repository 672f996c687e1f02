"""Logging setup and summary helpers shared by the CLI entry points."""
import logging
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Optional

DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(config: Optional[Dict[str, Any]] = None, debug: bool = False) -> logging.Logger:
    """Configure the root logger from a configuration's ``logging`` section.

    Recognised keys: ``level`` (INFO), ``format``, ``file`` (rotating file
    handler, ``max_file_size`` bytes and ``backup_count`` files) and ``console``
    (default true). ``debug`` forces DEBUG regardless of ``level``.
    """
    log_config = (config or {}).get("logging") or {}
    log_level = "DEBUG" if debug else str(log_config.get("level", "INFO"))
    log_format = log_config.get("format", DEFAULT_LOG_FORMAT)

    logging.getLogger().handlers.clear()
    handlers = []

    log_file = log_config.get("file")
    if log_file:
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=int(log_config.get("max_file_size", 10485760)),  # 10MB
            backupCount=int(log_config.get("backup_count", 5)),
        )
        file_handler.setFormatter(logging.Formatter(log_format))
        handlers.append(file_handler)

    if log_config.get("console", True):
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(logging.Formatter(log_format))
        handlers.append(console_handler)

    logging.basicConfig(
        level=getattr(logging, log_level.upper(), logging.INFO),
        format=log_format,
        handlers=handlers,
        force=True,
    )
    return logging.getLogger("population_election")


def log_experiment_summary(summary: Dict[str, Any], logger: logging.Logger) -> None:
    """Log the headline numbers of one experiment."""
    logger.info("=" * 50)
    logger.info(f"EXPERIMENT SUMMARY: {summary.get('scenario')} n={summary.get('n')} r={summary.get('r')}")
    logger.info("=" * 50)
    logger.info(f"Trials: {summary.get('trials', 0)}")
    logger.info(f"Stabilized: {summary.get('stabilized', 0)} ({summary.get('stabilized_fraction', 0.0):.1%})")
    if summary.get("median_stabilization") is not None:
        logger.info(f"Median interactions to stabilization: {summary['median_stabilization']:.0f}")
        logger.info(f"p95 interactions to stabilization: {summary['p95_stabilization']:.0f}")
    logger.info(f"Full resets: {summary.get('full_resets', 0)}  Soft resets: {summary.get('soft_resets', 0)}")
    if summary.get("closure_violations"):
        logger.warning(f"[STABLE] closure violated in {summary['closure_violations']} trial(s)")
    for monitor, count in (summary.get("monitor_violations") or {}).items():
        if count:
            logger.warning(f"[MONITOR] {monitor} violated in {count} trial(s)")
    logger.info("=" * 50)
