"""Exact metric algorithms on median graphs.

Library layout mirrors the pipeline: ``graph`` (substrate + oracles),
``theta`` (class partition, halfspaces, orientation), ``pof`` (orthogonal
families, hypercubes, MOPs, parallel streams), ``wopp`` (weighted opposites
on simplex systems), ``labels`` (phi / op / psi and eccentricities),
``reach`` (reach centralities), ``driver`` (halfspace splitting scheme),
``generators`` + ``harness`` (instances, cross-validation, benchmarks),
``cli`` (the ``medianecc`` command).
"""

__version__ = "0.1.0"

from .graph import (Graph, DistRow, GraphFormatError, GraphStructureError,
                    SizeCapError, bfs, distance_matrix, eccentricities_oracle,
                    from_edges, load_graph, median_of, verify_median)
from .theta import (Orientation, ThetaStructure, ThetaStructureError,
                    compute_theta, dimension, mask_members, orient, signature,
                    theta_oracle)
from .pof import (Hypercube, PofIndex, build_pof_index, crossing_graph,
                  enumerate_hypercubes, enumerate_mops, maximal_pofs,
                  minimal_parallel, parallel_adjacent_naive, star_graph)
from .wopp import (PofSystem, RefinementTree, WoppError, WoppResult,
                   build_refinement_tree, simplex_central_vertex,
                   simplex_eccentricities, solve_wopp, system_from_index)
from .labels import (LabelSet, MilestoneChain, OpTable, PhiTable, PsiTable,
                     build_structures, compute_labels, compute_op, compute_phi,
                     compute_psi, ecc_from_labels, eccentricities_fpt,
                     ladder_set, milestones)
from .reach import compute_reach, reach_fpt, reach_oracle
from .driver import (SplitTree, build_split_tree, ecc_subquadratic, gate_bfs,
                     merge_ecc)
from .generators import GenSpec, gen, make_spec, parse_spec
from .harness import Report, bench, crosscheck, run_ecc
