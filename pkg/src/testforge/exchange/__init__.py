from .archive import (
    ArchiveFormat,
    IncompleteSuite,
    ManifestEntry,
    OrphanFile,
    UnrecognizedLayout,
    detect_format,
    export_archive,
    import_archive,
    read_suite_dir,
    write_suite_dir,
)
from .mock import MockJudgeServer
from .remote import AuthFailure, RemoteClient, RemoteEndpoint, RemoteError, RemoteTimeout, UploadAck

__all__ = [
    "ArchiveFormat",
    "AuthFailure",
    "IncompleteSuite",
    "ManifestEntry",
    "MockJudgeServer",
    "OrphanFile",
    "RemoteClient",
    "RemoteEndpoint",
    "RemoteError",
    "RemoteTimeout",
    "UnrecognizedLayout",
    "UploadAck",
    "detect_format",
    "export_archive",
    "import_archive",
    "read_suite_dir",
    "write_suite_dir",
]
