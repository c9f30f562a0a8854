import logging
import sys
import json
from datetime import datetime, timezone
from typing import Any, Dict, Optional
from pathlib import Path
import traceback
from contextlib import contextmanager
import time
import uuid

UTC = timezone.utc  # datetime.UTC alias is Python 3.11+

from app.core.config import settings
from app.core.context import get_campaign
from app.core.errors import FullRankError


class StructuredFormatter(logging.Formatter):
    """结构化日志格式化器，输出JSON格式的日志"""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.fromtimestamp(record.created, UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        # 添加异常信息
        if record.exc_info and record.exc_info[0] is not None:
            log_entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": traceback.format_exception(*record.exc_info),
            }

        # 添加额外字段
        if hasattr(record, "extra_fields"):
            log_entry.update(record.extra_fields)

        if getattr(record, "campaign_id", None):
            log_entry["campaign_id"] = record.campaign_id

        return json.dumps(log_entry, ensure_ascii=False, default=str)


class ColoredFormatter(logging.Formatter):
    """彩色控制台格式化器：只给级别名着色，任务ID跟在级别后"""

    RESET = "\033[0m"
    LEVEL_COLORS = {
        logging.DEBUG: "\033[36m",
        logging.INFO: "\033[32m",
        logging.WARNING: "\033[33m",
        logging.ERROR: "\033[31m",
        logging.CRITICAL: "\033[35m",
    }

    def format(self, record: logging.LogRecord) -> str:
        original = record.levelname
        color = self.LEVEL_COLORS.get(record.levelno, "")
        campaign = getattr(record, "campaign_id", None)
        record.levelname = f"{color}{original}{self.RESET}" + (f" [{campaign}]" if campaign else "")
        try:
            return super().format(record)
        finally:
            record.levelname = original


class CampaignIdFilter(logging.Filter):
    """为日志记录添加当前验证任务ID的过滤器"""

    def filter(self, record: logging.LogRecord) -> bool:
        campaign_id = get_campaign()
        if campaign_id:
            record.campaign_id = campaign_id
        return True


class PerformanceLogger:
    """性能日志记录器"""

    def __init__(self, logger: logging.Logger):
        self.logger = logger

    @contextmanager
    def time_operation(self, operation_name: str, **kwargs):
        """记录操作耗时；库错误（参数、预算）记为 WARNING，其他异常带堆栈记为 ERROR"""
        operation_id = uuid.uuid4().hex[:8]
        fields = {"operation_id": operation_id, **kwargs}
        self.logger.debug(f"Starting operation: {operation_name}", extra={"extra_fields": fields})

        start_time = time.perf_counter()
        try:
            yield operation_id
        except FullRankError as e:
            self.logger.warning(
                f"Operation failed: {operation_name}",
                extra={"extra_fields": {**fields, "error": e.message, "exit_code": e.exit_code}},
            )
            raise
        except Exception as e:
            self.logger.error(
                f"Operation failed: {operation_name}",
                extra={"extra_fields": {**fields, "error": str(e)}},
                exc_info=True,
            )
            raise
        else:
            elapsed_ms = int((time.perf_counter() - start_time) * 1000)
            self.logger.info(
                f"Operation completed: {operation_name}",
                extra={"extra_fields": {**fields, "elapsed_ms": elapsed_ms}},
            )


def setup_logging(
    log_level: Optional[str] = None,
    log_format: Optional[str] = None,
    log_file: Optional[str] = None,
    enable_console: bool = True,
) -> logging.Logger:
    """设置日志配置

    Console output goes to stderr: stdout carries CLI payloads (JSON reports, certificates).
    """
    if log_level is None:
        log_level = settings.LOG_LEVEL
    if log_format is None:
        log_format = settings.LOG_FORMAT

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_level.upper()))
    root_logger.handlers.clear()

    campaign_filter = CampaignIdFilter()

    if enable_console:
        console_handler = logging.StreamHandler(sys.stderr)
        if log_format == "colored":
            console_formatter: logging.Formatter = ColoredFormatter(
                "%(asctime)s - %(name)s - %(lineno)d - %(levelname)s - %(message)s"
            )
        else:
            console_formatter = StructuredFormatter()
        console_handler.setFormatter(console_formatter)
        console_handler.addFilter(campaign_filter)
        root_logger.addHandler(console_handler)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(StructuredFormatter())
        file_handler.addFilter(campaign_filter)
        root_logger.addHandler(file_handler)

    app_logger = logging.getLogger("app")
    app_logger.setLevel(getattr(logging, log_level.upper()))
    return app_logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """获取日志记录器"""
    if name is None:
        name = "app"
    return logging.getLogger(name)


def log_campaign_event(
    event: str,
    theorem: str,
    counts: Dict[str, int],
    elapsed_ms: int,
    complete: bool = True,
    details: Optional[Dict[str, Any]] = None,
) -> None:
    """记录验证任务事件"""
    logger = get_logger("campaign")

    extra_fields = {
        "event": event,
        "theorem": theorem,
        "counts": counts,
        "elapsed_ms": elapsed_ms,
        "complete": complete,
        "details": details or {},
    }

    # 根据结果选择日志级别
    if counts.get("failed", 0) > 0 or not complete:
        log_method = logger.warning
    else:
        log_method = logger.info

    log_method(
        f"Campaign {event}: {theorem} {counts}",
        extra={"extra_fields": extra_fields},
    )


def log_case_failure(index: int, theorem: str, diagnostics: Dict[str, Any]) -> None:
    """记录单个失败案例"""
    get_logger("campaign").warning(
        f"Case {index} failed for {theorem}",
        extra={"extra_fields": {"case_index": index, "diagnostics": diagnostics}},
    )


performance_logger = PerformanceLogger(get_logger("performance"))
