import os
import pickle
from multiprocessing import Queue
from multiprocessing.synchronize import Event
from typing import Any, Iterator, Protocol, Tuple

from app.core.context import set_campaign
from app.core.logging import get_logger

logger = get_logger(__name__)

RESULT = "result"
ERROR = "error"
DONE = "done"


class StridedJob(Protocol):
    """A unit of work split by index: worker k of w handles the indices congruent to k mod w."""

    campaign_id: str | None

    def iter_stride(self, worker_index: int, workers: int) -> Iterator[Tuple[int, Any]]:
        ...


def _portable(exc: BaseException) -> BaseException:
    try:
        pickle.dumps(exc)
        return exc
    except Exception:
        return RuntimeError(f"{type(exc).__name__}: {exc}")


def worker_process(job: StridedJob, worker_index: int, workers: int, result_queue: Queue, stop_event: Event):
    """Worker进程主函数"""
    pid = os.getpid()
    set_campaign(getattr(job, "campaign_id", None))
    logger.debug(f"Worker {worker_index}/{workers} (pid {pid}) started")
    try:
        for index, payload in job.iter_stride(worker_index, workers):
            if stop_event.is_set():
                logger.info(f"Worker {worker_index} received stop signal")
                break
            result_queue.put((RESULT, index, payload))
    except KeyboardInterrupt:
        logger.info(f"Worker {worker_index} interrupted")
    except Exception as e:
        logger.error(f"Worker {worker_index} failed: {e}")
        result_queue.put((ERROR, worker_index, _portable(e)))
    finally:
        # 退出信号
        result_queue.put((DONE, worker_index, None))
        logger.debug(f"Worker {worker_index} (pid {pid}) stopped")
