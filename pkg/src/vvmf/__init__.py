"""Exact operator calculus for vector-valued modular forms: finite quadratic
modules, Weil representations, theta series, transfer operators, and
verification of quasi-pullback weight/divisor data for Borcherds products.
"""

from .lattice import (EvenLattice, Sublattice, EmbeddingData, build_embedding,
                      discriminant_module, orthogonal_complement,
                      lattice_U, lattice_A1, lattice_E7, lattice_E8,
                      lattice_II_2_26, lattice_sum, load_lattice_file,
                      parse_lattice_def)
from .fqm import (FqModule, IsotropicSubgroup, trivial_module, direct_sum,
                  perp_quotient, signature_mod8, level, negated,
                  graph_of_isotropic)
from .qexp import (ScalarQSeries, VVForm, add, scale, mul_scalar_series,
                   tensor, principal_part, is_integral_principal_part,
                   constant_term_even, check_minus_symmetry, read_vvform,
                   write_vvform)
from .theta import (ShortVectorQuery, short_vectors, short_vectors_box,
                    theta_coset, theta_coset_rep, theta_vv)
from .weil import GroupWord, WeilMatrix, identity_word, rho, rho_S, rho_T, \
    word_decompose
from .transfer import (contract_projection_path, pull_up, pull_up_emb,
                       push_down, push_down_emb, theta_contract, up_matrix,
                       down_matrix)
from .borcherds import (BorcherdsDescriptor, QPReport, descriptor,
                        predicted_qp_weight, quasi_pullback_form, r_order,
                        verify_main_theorem)
from .induction import (EtaQuotient, ScalarFormSpec, SlashedSlice,
                        coset_reps_gamma0, eta_expand, expand_spec, induce,
                        induce_mu, rationalize_components, slash_eta,
                        slash_spec, slash_theta_coset)

__all__ = [name for name in dir() if not name.startswith("_")]
