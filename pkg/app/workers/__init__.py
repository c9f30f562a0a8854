from .manager import PoolResult, WorkerPool
from .worker import StridedJob, worker_process

__all__ = ["PoolResult", "WorkerPool", "StridedJob", "worker_process"]
