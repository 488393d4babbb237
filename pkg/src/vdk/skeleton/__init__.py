from vdk.skeleton.laplacian import cotangent_laplacian
from vdk.skeleton.contraction import (
    ContractionState,
    contract_once,
    contract_to_skeleton,
)
from vdk.skeleton.endpoints import (
    SkeletonResult,
    detect_endpoints,
    select_root,
    extract_endpoints,
    save_endpoints,
    load_endpoints,
)

__all__ = [
    "cotangent_laplacian",
    "ContractionState",
    "contract_once",
    "contract_to_skeleton",
    "SkeletonResult",
    "detect_endpoints",
    "select_root",
    "extract_endpoints",
    "save_endpoints",
    "load_endpoints",
]
