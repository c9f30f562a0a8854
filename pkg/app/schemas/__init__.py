# Schemas package
from .campaign import (
    CampaignMode,
    CampaignSpec,
    FailureRecord,
    ReportCounts,
    Theorem,
    VerificationReport,
)
from .certificate import (
    LineCheckResponse,
    PencilAnalysisSchema,
    RankEntry,
    SearchResponse,
    WitnessCertificateSchema,
)
