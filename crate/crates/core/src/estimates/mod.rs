//! Lattice scans of the multiplier suprema behind the bilinear and trilinear
//! estimates, the resonance identities, boundedness trials for `T` and the
//! sharpness counterexample.
//!
//! Modulations are not enumerated. Each tuple is given its worst admissible
//! weight `L_max = max(1, |resonance|)`.

mod counterexample;
mod resonance;
mod scan;
mod tbound;

pub use counterexample::{
    counterexample_c_alpha, counterexample_constant, counterexample_exact, counterexample_scan,
    default_counterexample_ns, CounterexampleReport,
};
pub use resonance::{bilinear_resonance, quadruple_expansion, quadruple_resonance, QuadCase};
pub use scan::{
    analytic_verdict, default_grid, region_map, region_map_with, scan_m, scan_m_with, CutoffSup,
    LatticeScanConfig, MKind, RegionCell, ScanPartial, SymbolScanReport, Verdict,
    SYMBOL_GROWTH_THRESHOLD,
};
pub use tbound::{
    adversarial_inputs, t_bound_cell, AdversarialInput, t_ratio, test_t_boundedness, test_t_boundedness_with,
    TBoundReport, TBoundRow,
};
