"""
Experiments Router

`experiment`: runs a preset (fig1, fig2, fig3, custom) at desk or paper
scale and writes its CSV tables, JSON summary and the results ledger.
"""

import logging

from geodetect.core.config import Settings
from geodetect.core.deps import MODEL_ARGUMENTS, emit, get_output_dir, get_results_db_path
from geodetect.core.routing import CommandRouter, argument
from geodetect.db.session import build_engine, build_session_factory, get_db, init_db
from geodetect.experiments.repository import ReplicaRepository
from geodetect.experiments.schemas import ExperimentKind, Scale
from geodetect.experiments.service import ExperimentService, preset_config
from geodetect.inference.schemas import FMode

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(
    "experiment",
    argument("name", choices=[kind.value for kind in ExperimentKind]),
    argument("--scale", choices=[scale.value for scale in Scale], default=Scale.DESK.value),
    argument("--replicas", type=int),
    argument("--n", type=int),
    argument("--k", type=int),
    argument("--ks", type=int, nargs="+", help="community sizes of fig1"),
    argument("--t-n", dest="t_n", type=float),
    argument("--calib-C", dest="calib_c", type=float, help="skip calibration and use this constant"),
    argument("--M", dest="M", type=int),
    argument("--f-mode", choices=[mode.value for mode in FMode]),
    argument("--f-custom", type=float),
    *MODEL_ARGUMENTS,
    help="run a reference experiment",
)
def experiment_command(args, settings: Settings) -> int:
    config = preset_config(
        args.name,
        scale=args.scale,
        seed=settings.SEED,
        output_dir=get_output_dir(settings),
        jobs=settings.JOBS,
        replicas=args.replicas,
        n=args.n,
        k=args.k,
        ks=args.ks,
        t_n=args.t_n,
        calib_c=args.calib_c,
        M=args.M,
        f_mode=args.f_mode or settings.F_MODE,
        f_custom=args.f_custom if args.f_custom is not None else settings.F_CUSTOM,
        tau=args.tau,
        w0=args.w0,
        d=args.d,
        gamma=args.gamma,
        weight_mode=args.weight_mode,
        sparse_mode=args.sparse or None,
        apply_correction=False if args.no_correction else None,
        correct_type_a_pairs=args.correct_type_a_pairs or None,
    )

    engine = build_engine(get_results_db_path(settings))
    init_db(engine)
    with get_db(build_session_factory(engine)) as db:
        summary = ExperimentService(ReplicaRepository(db)).run(config)
    engine.dispose()

    emit(summary, params=summary["params"], seed=settings.SEED)
    return 0
