"""Collision, throughput and MAC-protocol analysis for directional
millimeter-wave ad hoc networks: closed forms, a Monte Carlo oracle over the
sectorized blockage model, and a discrete-event emulator on planar
topologies with segment obstacles."""

__version__ = "0.1.0"

from .model import (AntennaPattern, Channel, DerivedParams, FixedRange,
                    NoInterferenceRange, RangeFromLength, Scenario,
                    channel_60ghz, interference_range, link_length_density,
                    main_lobe_gain, reference_scenario, sector_count)
from .analytics import (CollisionResult, DegenerateDelay, DelayPmf,
                        ThroughputReport, aloha_delay_pmf, aloha_throughput,
                        collision_prob, collision_prob_given_length,
                        conditional_los_prob_nonempty,
                        los_prob_regular_sector, los_prob_tagged_sector,
                        min_distance_joint_density, optimize_tx_prob,
                        success_prob_given_length, tdma_throughput)
from .montecarlo import (Estimate, SectorTopology, collision_in_topology,
                         estimate_collision_prob, estimate_sector_los_prob,
                         sample_sector, sample_sector_topology)
from .topology import Link, PlanarTopology, build_topology, single_link_topology
from .simulator import (ConfigError, Csma, CsmaCa, MacConfig, SimStats,
                        SlottedAloha, Tdma, collision_check, csma_ca_cycle_us,
                        interference_map, run)
from .experiments import (ConfigFileError, ExperimentSpec, figure_preset,
                          load_config, run_experiment, spec_from_config,
                          spec_to_config, write_csv)
