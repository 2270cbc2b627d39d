"""Local decision and verification in the LOCAL and anonymous LOCAL models."""

from .graph import (Ball, Graph, IdentityAssignment, InputError, Instance, extract_ball,
                    format_instance, load_instance, make_instance, parse_instance,
                    rooted_isomorphic)
from .id_lifting import OracleN, lift_to_anonymous, run_lifted, simulation_count
from .languages import Language, get_language
from .lift import (LiftCounterexample, NodeMap, compose, find_t_local_isomorphism,
                   is_homomorphism, is_seed, is_t_local_isomorphism,
                   lift_closure_counterexample)
from .model import LocalDecider, Verdict, decides_correctly, hereditary_decider, run
from .nld import (MapCertificate, acceptance_oracle, certificate_size_bits,
                  honest_certificates, verify)

__version__ = "0.1.0"
