"""Video error concealment by temporal extrapolation plus Non-Local-Means refinement."""
from .core import (
    BlockLoc,
    BoundsError,
    ConfigError,
    DterError,
    Frame,
    LossMap,
    MotionVector,
    ValidationError,
    pixel_at,
)
from .loss import PatternConfig, apply_loss, checkerboard_pattern
from .metrics import ConcealmentReport, FrameRecord, PsnrMode, mean_gain, psnr_frame, psnr_sequence
from .pipeline import Algorithm, ContextMode, build_report, conceal_frame, conceal_sequence
from .refine import (
    ProcessingArea,
    RefinementParams,
    adaptive_h,
    conceal_block_dter,
    neighborhood_distance,
    nlm_weight,
    refine_block,
    refine_sample,
    spiral_order,
)
from .temporal import (
    Metric,
    SearchParams,
    TestArea,
    build_test_area,
    dmve_search,
    extrapolate_block,
    temporal_error,
)
from .video_io import (
    VideoSequence,
    read_loss_map,
    read_yuv420,
    write_report_csv,
    write_yuv420,
)

__version__ = "0.1.0"
