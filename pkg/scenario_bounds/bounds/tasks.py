from celery import shared_task

from scenario_bounds.bounds.sampling import BoundConfig, sample_range
from scenario_bounds.quantiles.types import ScenarioPair


@shared_task
def sample_bounds_shard(pair_data, cfg_data, start, stop):
    z_upper, z_lower = sample_range(
        ScenarioPair.from_dict(pair_data), BoundConfig.from_dict(cfg_data), start, stop
    )
    return {"start": start, "z_upper": z_upper.tolist(), "z_lower": z_lower.tolist()}
