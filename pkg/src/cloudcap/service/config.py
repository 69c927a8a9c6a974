"""Service configuration, read from CLOUDCAP_* environment variables."""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional


@dataclass
class ServiceConfig:
    port: int = 8080
    data_dir: Path = Path("data")
    workers: int = 2
    max_upload_mb: int = 100
    tls_cert: Optional[str] = None
    tls_key: Optional[str] = None
    port_labels_path: Optional[str] = None
    static_dir: Optional[str] = None
    # test hook: hold the job between dissection and artifact writes so
    # crash tests can kill the process mid-analysis deterministically
    analysis_delay_ms: int = 0

    @classmethod
    def from_env(cls, env=None) -> "ServiceConfig":
        env = os.environ if env is None else env
        return cls(
            port=int(env.get("CLOUDCAP_PORT", "8080")),
            data_dir=Path(env.get("CLOUDCAP_DATA_DIR", "data")),
            workers=int(env.get("CLOUDCAP_WORKERS", "2")),
            max_upload_mb=int(env.get("CLOUDCAP_MAX_UPLOAD_MB", "100")),
            tls_cert=env.get("CLOUDCAP_TLS_CERT"),
            tls_key=env.get("CLOUDCAP_TLS_KEY"),
            port_labels_path=env.get("CLOUDCAP_PORT_LABELS"),
            static_dir=env.get("CLOUDCAP_STATIC_DIR"),
            analysis_delay_ms=int(env.get("CLOUDCAP_ANALYSIS_DELAY_MS", "0")),
        )

    @property
    def staging_dir(self) -> Path:
        return self.data_dir / "staging"

    @property
    def archive_dir(self) -> Path:
        return self.data_dir / "archive"

    @property
    def index_path(self) -> Path:
        return self.data_dir / "index"

    def capture_dir(self, capture_id: str) -> Path:
        return self.archive_dir / capture_id

    def ensure_dirs(self):
        self.staging_dir.mkdir(parents=True, exist_ok=True)
        self.archive_dir.mkdir(parents=True, exist_ok=True)
