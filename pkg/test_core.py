"""
核心配置、错误与日志测试
Core Configuration, Error and Logging Tests
"""

import json
import logging

import pytest
from pydantic import ValidationError

from app.core.config import Settings, get_settings, settings
from app.core.context import get_campaign, set_campaign
from app.core.errors import (
    FieldMismatchError,
    FullRankError,
    HypothesisError,
    ParseError,
    ResourceExhaustedError,
    ShapeMismatchError,
    UsageError,
)
from app.core.logging import (
    CampaignIdFilter,
    ColoredFormatter,
    StructuredFormatter,
    log_campaign_event,
    log_case_failure,
    performance_logger,
    setup_logging,
)


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    for h in root.handlers:
        if h not in handlers:
            h.close()
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def campaign():
    set_campaign("abc123def456")
    yield "abc123def456"
    set_campaign(None)


def _record(msg: str = "hello", **extra) -> logging.LogRecord:
    record = logging.LogRecord("app.test", logging.INFO, __file__, 10, msg, None, None)
    for k, v in extra.items():
        setattr(record, k, v)
    return record


@pytest.mark.unit
class TestSettings:
    """测试配置 / Test settings"""

    def test_defaults(self):
        assert settings.PROJECT_NAME == "fullrank-lines"
        assert settings.DEFAULT_SEED == 0
        assert settings.MAX_EXHAUSTIVE_CASES > 0
        assert get_settings() is get_settings()

    def test_log_level_normalized(self):
        assert Settings(LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"
        with pytest.raises(ValidationError):
            Settings(LOG_LEVEL="loud")

    def test_log_format(self):
        assert Settings(LOG_FORMAT="json").LOG_FORMAT == "json"
        with pytest.raises(ValidationError):
            Settings(LOG_FORMAT="xml")

    @pytest.mark.parametrize("name", ["ELEMENT_BUDGET", "WORKERS", "SAMPLE_FALLBACK_COUNT"])
    def test_budgets_positive(self, name):
        with pytest.raises(ValidationError):
            Settings(**{name: 0})

    def test_seed_non_negative(self):
        with pytest.raises(ValidationError):
            Settings(DEFAULT_SEED=-1)

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("ELEMENT_BUDGET", "1024")
        monkeypatch.setenv("GF2_PACKED", "false")
        s = Settings()
        assert s.ELEMENT_BUDGET == 1024
        assert s.GF2_PACKED is False


@pytest.mark.unit
class TestErrors:
    """测试错误层级与退出码 / Test the error hierarchy and exit codes"""

    def test_exit_codes(self):
        for cls in (UsageError, FieldMismatchError, ShapeMismatchError, HypothesisError):
            assert cls("x").exit_code == 2
            assert issubclass(cls, FullRankError)
        assert ResourceExhaustedError("x").exit_code == 3

    def test_parse_error_line(self):
        e = ParseError("bad entry", line=7)
        assert e.message == "line 7: bad entry"
        assert e.line == 7
        assert ParseError("bad").message == "bad"

    def test_resource_details(self):
        e = ResourceExhaustedError("too many", required=512, budget=10)
        assert (e.required, e.budget) == (512, 10)


@pytest.mark.unit
class TestLogging:
    """测试结构化日志 / Test structured logging"""

    def test_structured_formatter(self, campaign):
        record = _record(extra_fields={"event": "finished"}, campaign_id=campaign)
        data = json.loads(StructuredFormatter().format(record))
        assert data["message"] == "hello"
        assert data["level"] == "INFO"
        assert data["event"] == "finished"
        assert data["campaign_id"] == campaign

    def test_campaign_filter(self, campaign):
        record = _record()
        assert CampaignIdFilter().filter(record)
        assert record.campaign_id == campaign

    def test_filter_without_campaign(self):
        set_campaign(None)
        record = _record()
        CampaignIdFilter().filter(record)
        assert not hasattr(record, "campaign_id")
        assert get_campaign() is None

    def test_log_file_is_json(self, tmp_path, restore_root_logger, campaign):
        log_file = tmp_path / "logs" / "run.log"
        setup_logging(log_level="INFO", log_format="json", log_file=str(log_file), enable_console=False)
        logging.getLogger("app.test").info("written")
        for h in logging.getLogger().handlers:
            h.flush()
        lines = log_file.read_text(encoding="utf-8").splitlines()
        entry = json.loads(lines[-1])
        assert entry["message"] == "written"
        assert entry["campaign_id"] == campaign

    def test_campaign_event_levels(self, caplog):
        with caplog.at_level(logging.INFO, logger="campaign"):
            log_campaign_event("finished", "main", {"total": 3, "failed": 0}, 5)
            log_campaign_event("finished", "main", {"total": 3, "failed": 1}, 5)
            log_campaign_event("finished", "main", {"total": 3, "failed": 0}, 5, complete=False)
        levels = [r.levelno for r in caplog.records if r.name == "campaign"]
        assert levels == [logging.INFO, logging.WARNING, logging.WARNING]
        assert caplog.records[0].extra_fields["theorem"] == "main"

    def test_case_failure(self, caplog):
        with caplog.at_level(logging.WARNING, logger="campaign"):
            log_case_failure(4, "pencil", {"status": "exhausted-no-witness"})
        (record,) = [r for r in caplog.records if r.name == "campaign"]
        assert record.extra_fields["case_index"] == 4

    def test_time_operation(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="performance"):
            with performance_logger.time_operation("scan", theorem="main") as operation_id:
                pass
        done = [r for r in caplog.records if r.getMessage() == "Operation completed: scan"]
        assert done and done[0].extra_fields["operation_id"] == operation_id
        assert done[0].extra_fields["theorem"] == "main"

    def test_time_operation_reraises(self, caplog):
        with caplog.at_level(logging.ERROR, logger="performance"):
            with pytest.raises(RuntimeError):
                with performance_logger.time_operation("boom"):
                    raise RuntimeError("x")
        assert any(r.getMessage() == "Operation failed: boom" for r in caplog.records)

    def test_library_errors_logged_as_warning(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="performance"):
            with pytest.raises(UsageError):
                with performance_logger.time_operation("parse"):
                    raise UsageError("bad input")
        (failed,) = [r for r in caplog.records if r.getMessage() == "Operation failed: parse"]
        assert failed.levelno == logging.WARNING
        assert failed.extra_fields["exit_code"] == 2
        assert not any(r.getMessage() == "Operation completed: parse" for r in caplog.records)

    def test_colored_formatter(self, campaign):
        record = _record(campaign_id=campaign)
        text = ColoredFormatter("%(levelname)s %(message)s").format(record)
        assert text.endswith(f"INFO{ColoredFormatter.RESET} [{campaign}] hello")
        assert record.levelname == "INFO"
