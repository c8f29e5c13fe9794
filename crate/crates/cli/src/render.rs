//! Rendering of exact values for TSV and JSON output.

use modcurve::exact::qseries::SeriesValuation;
use modcurve::exact::rat_to_string;
use modcurve::exact::tower::TowerElem;
use serde_json::json;

/// A series valuation as a TSV cell: the exact order, or ">=p" when the
/// series is only zero to precision.
pub fn valuation(v: &SeriesValuation) -> String {
    match v {
        SeriesValuation::Finite(j) => j.to_string(),
        SeriesValuation::ZeroToPrecision(p) => format!(">={p}"),
    }
}

/// A tensor-product element as JSON: a bare string when rational, else
/// its cyclotomic conductor and coordinate matrix (rows = number-field
/// basis, columns = powers of the root of unity).
pub fn tower_json(t: &TowerElem) -> serde_json::Value {
    use modcurve::exact::FieldElem;
    if let Some(r) = t.to_rational() {
        return json!(rat_to_string(&r));
    }
    let m = t.conductor();
    let coords: Vec<Vec<String>> = t
        .coeffs()
        .iter()
        .map(|c| c.lift_to(m).coeffs().iter().map(rat_to_string).collect())
        .collect();
    json!({
        "conductor": m,
        "coords": coords,
    })
}

/// Compact single-cell rendering of a tensor-product element.
pub fn tower_compact(t: &TowerElem) -> String {
    serde_json::to_string(&tower_json(t)).expect("JSON rendering of exact values cannot fail")
}
