from .campaign_service import CampaignJob, CampaignService, CaseResult, CaseStatus, evaluate_case, run_campaign
from .cases import Case, case_order_hash, count_cases, iter_cases
from .side_conditions import SideCondition, side_condition_by_scan, side_condition_holds
