from contextvars import ContextVar
from typing import Optional

campaign_var: ContextVar[Optional[str]] = ContextVar("campaign", default=None)


def set_campaign(campaign_id: Optional[str]) -> None:
    campaign_var.set(campaign_id)


def get_campaign() -> Optional[str]:
    return campaign_var.get()
