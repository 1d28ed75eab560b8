from .errors import ConsistencyError, ConvergenceError, GramstabException, InputError
from .matcrit import (
    char_poly,
    square_trace_verdict,
    sym_skew_split,
    theorem1_verdicts,
    trace_power_sums,
)
from .mech import (
    circulatory_power_sums,
    circulatory_reduced_polynomial,
    circulatory_verdicts,
    closed_forms,
    example_charged_particle,
    example_circulatory3,
    family_system,
    gyro_power_sum_identities,
    gyro_reduced_polynomial,
    gyroscopic_prop2_verdicts,
    gyroscopic_verdict_thm4,
    normal_form,
)
from .models import (
    CirculatorySystem,
    Classification,
    ConsistencyReport,
    Context,
    CriterionVerdict,
    Family,
    GramCertificate,
    GyroPowerSums,
    GyroscopicSystem,
    MonicPolynomial,
    NormalForm,
    PowerSums,
    RootSet,
    SpectralReport,
    SymSkewSplit,
)
from .oracle import (
    check_sufficiency,
    classify_spectrum,
    find_roots,
    spectral_report,
    verify_instability,
)
from .polycrit import (
    complex_root_certificate,
    gram_determinant,
    newton_power_sums,
    power_sums_from_roots,
    prop1_verdicts,
    prop2_verdicts,
)

__all__ = (
    "CirculatorySystem",
    "Classification",
    "ConsistencyError",
    "ConsistencyReport",
    "Context",
    "ConvergenceError",
    "CriterionVerdict",
    "Family",
    "GramCertificate",
    "GramstabException",
    "GyroPowerSums",
    "GyroscopicSystem",
    "InputError",
    "MonicPolynomial",
    "NormalForm",
    "PowerSums",
    "RootSet",
    "SpectralReport",
    "SymSkewSplit",
    "char_poly",
    "check_sufficiency",
    "circulatory_power_sums",
    "circulatory_reduced_polynomial",
    "circulatory_verdicts",
    "classify_spectrum",
    "closed_forms",
    "complex_root_certificate",
    "example_charged_particle",
    "example_circulatory3",
    "family_system",
    "find_roots",
    "gram_determinant",
    "gyro_power_sum_identities",
    "gyro_reduced_polynomial",
    "gyroscopic_prop2_verdicts",
    "gyroscopic_verdict_thm4",
    "newton_power_sums",
    "normal_form",
    "power_sums_from_roots",
    "prop1_verdicts",
    "prop2_verdicts",
    "spectral_report",
    "square_trace_verdict",
    "sym_skew_split",
    "theorem1_verdicts",
    "trace_power_sums",
    "verify_instability",
)
