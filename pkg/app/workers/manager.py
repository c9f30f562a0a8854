import multiprocessing
from dataclasses import dataclass, field
from multiprocessing import Process, Queue
from queue import Empty
from typing import Any, List, Optional, Tuple

from app.core.config import settings
from app.core.logging import get_logger
from app.workers.worker import DONE, ERROR, RESULT, StridedJob, worker_process

logger = get_logger("workers.manager")


@dataclass
class PoolResult:
    results: List[Tuple[int, Any]] = field(default_factory=list)
    complete: bool = True


class WorkerPool:
    """Worker进程池管理器：按下标步长划分任务，按下标顺序合并结果。

    With ``workers == 1`` the job runs in the calling process; the merged output is identical for
    every worker count.
    """

    def __init__(self, workers: Optional[int] = None, queue_size: Optional[int] = None):
        self.workers_count = workers or settings.WORKERS
        self.queue_size = queue_size or settings.WORKER_QUEUE_SIZE
        self.workers: List[Process] = []
        self.result_queue: Optional[Queue] = None
        self.stop_event = None

    def run(self, job: StridedJob) -> PoolResult:
        if self.workers_count <= 1:
            return self._run_inline(job)
        return self._run_parallel(job)

    def _run_inline(self, job: StridedJob) -> PoolResult:
        out = PoolResult()
        try:
            for index, payload in job.iter_stride(0, 1):
                out.results.append((index, payload))
        except KeyboardInterrupt:
            logger.warning("Interrupted, returning partial results")
            out.complete = False
        return out

    def start_worker_pool(self, job: StridedJob) -> List[Process]:
        """启动Worker进程池"""
        logger.info(f"Starting {self.workers_count} worker processes")
        ctx = multiprocessing.get_context()
        self.result_queue = ctx.Queue(maxsize=self.queue_size)
        self.stop_event = ctx.Event()
        self.workers = []
        for i in range(self.workers_count):
            worker = ctx.Process(
                target=worker_process,
                args=(job, i, self.workers_count, self.result_queue, self.stop_event),
                daemon=True,
            )
            worker.start()
            self.workers.append(worker)
            logger.debug(f"Started worker process {i} with pid {worker.pid}")
        return self.workers

    def _run_parallel(self, job: StridedJob) -> PoolResult:
        out = PoolResult()
        error: Optional[BaseException] = None
        self.start_worker_pool(job)
        finished = 0
        try:
            while finished < len(self.workers):
                try:
                    kind, key, payload = self.result_queue.get(timeout=0.5)
                except Empty:
                    if not any(w.is_alive() for w in self.workers) and self.result_queue.empty():
                        logger.error("All workers exited without completing")
                        out.complete = False
                        break
                    continue
                if kind == RESULT:
                    out.results.append((key, payload))
                elif kind == ERROR:
                    error = error or payload
                    self.stop_event.set()
                elif kind == DONE:
                    finished += 1
        except KeyboardInterrupt:
            logger.warning("Interrupted, stopping workers")
            self.stop_event.set()
            out.complete = False
        finally:
            self.stop_worker_pool()

        if error is not None:
            raise error
        if self.stop_event is not None and self.stop_event.is_set():
            out.complete = False
        out.results.sort(key=lambda item: item[0])
        return out

    def stop_worker_pool(self) -> None:
        """停止Worker进程池"""
        for worker in self.workers:
            try:
                worker.join(timeout=3)
                if worker.is_alive():
                    logger.warning(f"Worker {worker.pid} still alive, sending SIGTERM")
                    worker.terminate()
                    worker.join(timeout=2)
            except Exception as e:
                logger.error(f"Error stopping worker {worker.pid}: {e}")
        self.workers.clear()
        self._cleanup_queues()

    def _cleanup_queues(self) -> None:
        """Clean up multiprocessing queues to prevent semaphore leaks"""
        if self.result_queue is None:
            return
        try:
            while not self.result_queue.empty():
                self.result_queue.get_nowait()
        except Exception:
            pass
        self.result_queue.close()
        self.result_queue.join_thread()
        self.result_queue = None
