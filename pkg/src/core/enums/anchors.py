from enum import Enum


class CheckAnchor(str, Enum):
    """Identifier of the inequality or identity a verification row refers to."""

    STRUCTURE_CONDITIONS = "structure_conditions"
    CONVEXITY_CONDITION = "convexity_condition"
    GROWTH_EXPONENTS = "growth_exponents"
    SANDWICH_INEQUALITY = "sandwich_inequality"
    YOUNG_TYPE_INEQUALITY = "young_type_inequality"
    HOLDER_INEQUALITY = "holder_inequality"
    MODULAR_NORM_RELATIONS = "modular_norm_relations"
    MODULAR_NORM_CONVERGENCE = "modular_norm_convergence"
    FTC_COMPOSITION = "ftc_composition"
    SEMINORM_MODULAR_RELATIONS = "seminorm_modular_relations"
    INTEGRAL_OPERATOR_BOUND = "integral_operator_bound"
    POINCARE_INEQUALITY = "poincare_inequality"
    SUP_NORM_BOUND = "sup_norm_bound"
    PSI_KERNEL_CONDITION = "psi_kernel_condition"
    NORM_EQUIVALENCE = "norm_equivalence"
    AMBROSETTI_RABINOWITZ = "ambrosetti_rabinowitz"
    PRIMITIVE_GROWTH = "primitive_growth"
    PALAIS_SMALE_BOUND = "palais_smale_bound"

    @property
    def citation(self) -> str:
        """Equation, proposition or lemma the check is stated in, as written in the anchor column of reports."""
        return CITATIONS[self]


CITATIONS: dict[CheckAnchor, str] = {
    CheckAnchor.STRUCTURE_CONDITIONS: "§2.1",
    CheckAnchor.CONVEXITY_CONDITION: "Eq. (convex)",
    CheckAnchor.GROWTH_EXPONENTS: "Eq. (++)",
    CheckAnchor.SANDWICH_INEQUALITY: "Eq. (S)",
    CheckAnchor.YOUNG_TYPE_INEQUALITY: "Proposition after Thm 3.1",
    CheckAnchor.HOLDER_INEQUALITY: "Eq. (HOLDER)",
    CheckAnchor.MODULAR_NORM_RELATIONS: "Prop. 2.1",
    CheckAnchor.MODULAR_NORM_CONVERGENCE: "Prop. 2.1",
    CheckAnchor.FTC_COMPOSITION: "Prop. 3.4",
    CheckAnchor.SEMINORM_MODULAR_RELATIONS: "Prop. 3.2",
    CheckAnchor.INTEGRAL_OPERATOR_BOUND: "Prop. 3.3",
    CheckAnchor.POINCARE_INEQUALITY: "Prop. 3.5",
    CheckAnchor.SUP_NORM_BOUND: "Eq. (IN)",
    CheckAnchor.PSI_KERNEL_CONDITION: "Eq. (condition)",
    CheckAnchor.NORM_EQUIVALENCE: "Remark 3.2",
    CheckAnchor.AMBROSETTI_RABINOWITZ: "(h₂)",
    CheckAnchor.PRIMITIVE_GROWTH: "Lemma 4.2",
    CheckAnchor.PALAIS_SMALE_BOUND: "Lemma 4.4",
}
