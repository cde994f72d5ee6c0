"""
Catalog of check families: which suite runs them and the identity each one
mechanises.  ``wqa list-checks`` prints this table.
"""

from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict


class CheckFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    family: str
    anchor: str


RELATION_ANCHORS: Dict[str, str] = {
    "torus-inverse": "J^{m-1} = K_i Kb_i = D_i Db_i",
    "j-idempotency": "J^m = J",
    "torus-commutation": "K, Kb, D, Db pairwise commute",
    "j-torus-commutation": "J commutes with K, Kb, D, Db",
    "torus-absorption": "K_i J^{m-1} = J^{m-1} K_i = K_i (and Kb, D, Db)",
    "type-one-exchange": "K_j E_i = q_i^{a_ij} E_i K_j, Kb_j F_i = q_i^{a_ij} F_i Kb_j",
    "type-zero-conjugation": "K_j E_i Kb_j = q_i^{a_ij} E_i for type-zero E_i",
    "type-zero-absorption": "E_i J^{m-1} = J^{m-1} E_i = E_i for type-zero E_i",
    "d-exchange": "D_j E_i = q^{delta_ij} E_i D_j, D_j F_i = q^{-delta_ij} F_i D_j",
    "d-conjugation": "D_j E_i Db_j = q^{delta_ij} E_i for type-zero E_i",
    "central-idempotent": "J^{m-1} is central",
    "ef-commutator": "E_i F_j - F_j E_i = delta_ij (K_i - Kb_i)/(q_i - q_i^{-1})",
    "quantum-serre": "sum_r (-1)^r [1-a_ij, r]_i X_i^{1-a_ij-r} X_j X_i^r = 0",
    "commutation": "E_i E_j = E_j E_i, F_i F_j = F_j F_i when a_ij = 0",
}

CATALOG: Tuple[CheckFamily, ...] = (
    CheckFamily(suite="datum", family="datum-valid", anchor="a_ii = 2 or a_ii <= 0; a_ij <= 0; a_ij = 0 iff a_ji = 0; diag(s) A symmetric"),
    CheckFamily(suite="datum", family="datum-form-symmetry", anchor="(alpha_i|alpha_j) = s_i a_ij is symmetric"),
    CheckFamily(suite="datum", family="reduction-idempotence", anchor="reduce(reduce(x)) = reduce(x)"),
    CheckFamily(suite="datum", family="centrality", anchor="J^{m-1} is a central idempotent"),
    CheckFamily(suite="datum", family="serre-reduces", anchor=RELATION_ANCHORS["quantum-serre"]),
    CheckFamily(suite="datum", family="peirce", anchor="x = x J^{m-1} + x (1 - J^{m-1})"),
    CheckFamily(suite="bialgebra", family="coproduct", anchor="Delta extends to an algebra morphism"),
    CheckFamily(suite="bialgebra", family="counit", anchor="epsilon extends to an algebra morphism"),
    CheckFamily(suite="bialgebra", family="antipode", anchor="T extends to an algebra anti-morphism"),
    CheckFamily(suite="bialgebra", family="coassociativity", anchor="(Delta (x) 1) Delta = (1 (x) Delta) Delta"),
    CheckFamily(suite="bialgebra", family="counit-law", anchor="(epsilon (x) 1) Delta = id = (1 (x) epsilon) Delta"),
    CheckFamily(suite="weak-antipode", family="id-T-id", anchor="(id * T * id)(X) = X"),
    CheckFamily(suite="weak-antipode", family="T-id-T", anchor="(T * id * T)(X) = T(X)"),
    CheckFamily(suite="weak-antipode", family="convolution-associativity", anchor="(f * g) * h = f * (g * h)"),
    CheckFamily(suite="gate", family="weak-gate", anchor="bare J passes the weak axioms iff m = 2, 3"),
    CheckFamily(suite="subalgebras", family="subalgebra-exponents", anchor="J^{3r} = J^r iff 2r = 0 mod (m-1)"),
    CheckFamily(suite="subalgebras", family="sub-bialgebra", anchor="J -> J^r identifies the subalgebra with B_2 or B_3"),
    CheckFamily(suite="grouplikes", family="grouplike", anchor="Delta(g) = g (x) g and epsilon(g) = 1"),
    CheckFamily(suite="grouplikes", family="grouplike-closure", anchor="grouplikes of U J^{m-1} form a monoid"),
    CheckFamily(suite="grouplikes", family="grouplike-ansatz", anchor="J^{m-1} + k^{-1}(1 - J^{m-1}) is grouplike iff k = 1"),
    CheckFamily(suite="morphisms", family="quotient", anchor="J -> 1 onto U_q'(G)"),
    CheckFamily(suite="morphisms", family="psi", anchor="U_q'(G) -> w U J^{m-1}, E_i -> E_i J^{m-1}"),
    CheckFamily(suite="morphisms", family="phi", anchor="w U J^{m-1} -> U_q'(G), J -> 1"),
    CheckFamily(suite="morphisms", family="composite", anchor="phi psi = id and psi phi = id"),
    CheckFamily(suite="morphisms", family="phi-r", anchor="J -> J^r preserves the relations"),
    CheckFamily(suite="morphisms", family="phi-r-inverse", anchor="J -> J^r is invertible iff rs = 1 mod (m-1)"),
    CheckFamily(suite="morphisms", family="phi-r-coproduct", anchor="Delta phi_r = (phi_r (x) phi_r) Delta"),
    CheckFamily(suite="morphisms", family="phi-s", anchor="D_i -> J^{m-1-s} D_i, Db_i -> J^s Db_i"),
    CheckFamily(suite="modules", family="module-relations", anchor="every defining relation acts as zero"),
    CheckFamily(suite="modules", family="sector", anchor="J^{m-1} acts as identity or as zero"),
    CheckFamily(suite="modules", family="averaging-idempotent", anchor="e^2 = e and J^{m-1} e = e"),
    CheckFamily(suite="modules", family="averaging-action", anchor="e acts as 1 for gamma = 1 and as 0 for a primitive root"),
    CheckFamily(suite="modules", family="averaging-commutes", anchor="(F_i e - e F_i)V = (E_i e - e E_i)V = 0"),
    CheckFamily(suite="modules", family="onedim-wbar", anchor="one-dimensional w-bar modules exist when a_ij = 0 on type-one real indices"),
    CheckFamily(suite="characters", family="character-crosscheck", anchor="truncated Borcherds-Kac-Weyl character = module weight multiplicities"),
)


def relation_anchor(family: str) -> str:
    return RELATION_ANCHORS.get(family, family)


def anchor(family: str) -> str:
    for entry in CATALOG:
        if entry.family == family:
            return entry.anchor
    return relation_anchor(family)


def families_for(suite: str) -> List[CheckFamily]:
    return [entry for entry in CATALOG if entry.suite == suite]
