from typing import List, Optional

from pydantic import BaseModel, Field

from app.algebra.pencil import LineClass, PencilAnalysis
from app.lines.predicates import LineCheck, WitnessCertificate
from app.lines.search import SearchOutcome, SearchStatus
from app.utils.textformat import format_matrix, parse_matrix


class RankEntry(BaseModel):
    t: str
    rank: int


class PencilAnalysisSchema(BaseModel):
    classification: LineClass
    polynomial: str
    witness: Optional[str] = None

    @classmethod
    def from_analysis(cls, analysis: PencilAnalysis) -> "PencilAnalysisSchema":
        return cls(
            classification=analysis.classification,
            polynomial=analysis.poly.render(),
            witness=str(analysis.witness) if analysis.witness is not None else None,
        )


class WitnessCertificateSchema(BaseModel):
    """证书序列化格式：矩阵以文本格式嵌入"""
    A: str
    N: str
    field: str
    table: List[RankEntry]
    verdict: str = "full-rank"
    analysis: Optional[PencilAnalysisSchema] = None

    @classmethod
    def from_certificate(cls, cert: WitnessCertificate) -> "WitnessCertificateSchema":
        f = cert.field
        return cls(
            A=format_matrix(cert.A),
            N=format_matrix(cert.N),
            field=str(f),
            table=[RankEntry(t=f.format(t), rank=r) for t, r in cert.table],
            analysis=PencilAnalysisSchema.from_analysis(cert.analysis) if cert.analysis else None,
        )

    def to_certificate(self) -> WitnessCertificate:
        """Rebuild the certificate; the pencil analysis is recomputed by ``validate``."""
        A = parse_matrix(self.A)
        N = parse_matrix(self.N)
        f = A.field
        table = tuple((f.parse(entry.t), entry.rank) for entry in self.table)
        return WitnessCertificate(A, N, table)


class LineCheckResponse(BaseModel):
    verdict: str
    certificate: Optional[WitnessCertificateSchema] = None
    failing_t: Optional[str] = None

    @classmethod
    def from_check(cls, check: LineCheck) -> "LineCheckResponse":
        if check.full_rank:
            return cls(
                verdict="full-rank",
                certificate=WitnessCertificateSchema.from_certificate(check.certificate),
            )
        return cls(verdict="not-full-rank", failing_t=str(check.failing_t))


class SearchResponse(BaseModel):
    status: SearchStatus
    cases_examined: int
    certificate: Optional[WitnessCertificateSchema] = None
    strategy: str = Field(default="exhaustive")

    @classmethod
    def from_outcome(cls, outcome: SearchOutcome, strategy: str) -> "SearchResponse":
        cert = outcome.certificate
        return cls(
            status=outcome.status,
            cases_examined=outcome.cases_examined,
            certificate=WitnessCertificateSchema.from_certificate(cert) if cert else None,
            strategy=strategy,
        )
