"""FIFO job queue drained by a bounded worker-thread pool.

A capture id is either pending or in flight, never both, so two jobs
for the same capture cannot run at once.
"""

import logging
import threading
from collections import deque

log = logging.getLogger(__name__)


class JobQueue:
    def __init__(self, handler, workers: int = 2):
        self._handler = handler
        self._workers = max(1, workers)
        self._cond = threading.Condition()
        self._pending = deque()
        self._pending_set = set()
        self._in_flight = set()
        self._threads = []
        self._stopping = False

    def start(self):
        for i in range(self._workers):
            t = threading.Thread(target=self._run, name=f"analysis-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self, timeout: float = 10.0):
        with self._cond:
            self._stopping = True
            self._cond.notify_all()
        for t in self._threads:
            t.join(timeout)
        self._threads.clear()

    def submit(self, capture_id: str) -> bool:
        """Enqueue unless the id is already pending or running."""
        with self._cond:
            if capture_id in self._pending_set or capture_id in self._in_flight:
                return False
            self._pending.append(capture_id)
            self._pending_set.add(capture_id)
            self._cond.notify()
            return True

    def snapshot(self) -> dict:
        with self._cond:
            return {
                "pending": list(self._pending),
                "in_flight": set(self._in_flight),
                "workers": self._workers,
            }

    def _run(self):
        while True:
            with self._cond:
                while not self._pending and not self._stopping:
                    self._cond.wait()
                if self._stopping:
                    return
                capture_id = self._pending.popleft()
                self._pending_set.discard(capture_id)
                self._in_flight.add(capture_id)
            try:
                self._handler(capture_id)
            except Exception:
                log.exception("job %s crashed", capture_id)
            finally:
                with self._cond:
                    self._in_flight.discard(capture_id)
