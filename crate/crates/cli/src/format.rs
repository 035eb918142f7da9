/// Twelve significant digits in fixed notation. Values below one keep twelve
/// decimals, so round-off around zero prints as `0.000000000000`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let decimals = if x.abs() < 1.0 {
        12
    } else {
        (11 - x.abs().log10().floor() as i64).max(0) as usize
    };
    let s = format!("{x:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}
