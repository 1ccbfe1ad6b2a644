"""Triangulations, coloured Hasse diagrams, tree decompositions and MSO."""

__version__ = "0.1.0"

from .triangulation import (Triangulation, Gluing, TriangulationError,
                            make_triangulation, parse_triangulation,
                            load_and_validate, compute_skeleton,
                            subface_holds, dual_graph, subdivide_simplex)
from .graphs import (SimpleGraph, EdgeColouredGraph, EncodedGraph, GraphError,
                     make_simple_graph, make_edge_coloured_graph,
                     encode_simple, encoded_size_formula, parse_graph)
from .treedecomp import (TreeDecomposition, DecompositionError,
                         make_decomposition, parse_decomposition,
                         validate_decomposition, decompose,
                         lift_to_encoded, lift_to_hasse)
from .hasse import (ColouredHasseDiagram, hasse_colours, build_hasse,
                    EMPTY_COLOUR)
from .mso import (parse_formula, formula_to_text, evaluate, evaluate_partial,
                  solve_extremum, solve_evaluation, ExtremumProblem,
                  EvaluationProblem, MsoError, SortError, BudgetError)
from .translate import (translate_coloured, translate_triangulation,
                        encoded_assignment, hasse_assignment)
from .taut import is_taut, taut_bruteforce, taut_dp, taut_sentence
from .morse import (morse_validate, morse_optimal, morse_problem,
                    critical_count)
from .tv import (TvConstantTable, unit_table, load_tv_table, tv_admissible,
                 tv_bruteforce, tv_dp, tv_problem)
