//! Line-oriented run configuration.
//!
//! A config file names its subcommand in a bracket header and then lists
//! `key = value unit` pairs, one per line (`#` starts a comment):
//!
//! ```text
//! [dispersive-z]
//! gamma = 100 MHz
//! chi   = 50 MHz
//! ```
//!
//! Every physical quantity carries an explicit unit suffix. Frequencies and
//! rates are *cyclic* (Hz and friends); each key's schema entry records how
//! the runner reads it — almost all rate keys become angular (2π × value)
//! internally, matching the usual "κ/2π = … MHz" convention. A unit may also
//! name a previously defined key of the same dimension ("30 gamma" means
//! thirty times the resolved `gamma`), and a sweep line
//!
//! ```text
//! sweep = chi : 0 .. 30 gamma, 601 samples
//! ```
//!
//! requests a linear scan of one key. Parsing validates the whole file and
//! reports *every* problem, each tagged with its line number.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Physical dimension of a config key; fixes the accepted unit suffixes and
/// the canonical unit used when a config is re-emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Cyclic frequency or rate. Canonical unit Hz.
    Rate,
    /// Canonical unit s.
    Time,
    /// Canonical unit K.
    Temperature,
    /// Canonical unit m.
    Length,
    /// Canonical unit m/s.
    Speed,
    /// Canonical unit rad; `pi` scales by π.
    Angle,
    /// Dimensionless ratio; suffix `dimensionless`.
    Ratio,
    /// Bare non-negative integer (no unit suffix).
    Count,
}

impl Dimension {
    pub fn canonical_unit(self) -> &'static str {
        match self {
            Dimension::Rate => "Hz",
            Dimension::Time => "s",
            Dimension::Temperature => "K",
            Dimension::Length => "m",
            Dimension::Speed => "m/s",
            Dimension::Angle => "rad",
            Dimension::Ratio => "dimensionless",
            Dimension::Count => "",
        }
    }

    /// Multiplier that converts a value in `unit` to the canonical unit.
    fn unit_scale(self, unit: &str) -> Option<f64> {
        let table: &[(&str, f64)] = match self {
            Dimension::Rate => {
                &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9), ("THz", 1e12)]
            }
            Dimension::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)],
            Dimension::Temperature => &[("K", 1.0), ("mK", 1e-3)],
            Dimension::Length => &[("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)],
            Dimension::Speed => &[("m/s", 1.0)],
            Dimension::Angle => &[("rad", 1.0), ("pi", std::f64::consts::PI)],
            Dimension::Ratio => &[("dimensionless", 1.0)],
            Dimension::Count => &[],
        };
        table.iter().find(|(name, _)| *name == unit).map(|(_, s)| *s)
    }

    fn example(self) -> &'static str {
        match self {
            Dimension::Rate => "100 MHz",
            Dimension::Time => "50 us",
            Dimension::Temperature => "35 mK",
            Dimension::Length => "3 um",
            Dimension::Speed => "3.7 m/s",
            Dimension::Angle => "0.5 pi",
            Dimension::Ratio => "0.377 dimensionless",
            Dimension::Count => "10",
        }
    }
}

/// Schema entry for one config key.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub dim: Dimension,
    pub required: bool,
    /// Inserted (in canonical units) when the key is absent. A key that is
    /// neither required nor defaulted is optional: the runner decides.
    pub default: Option<f64>,
    /// How the runner reads the stored value — in particular whether a cyclic
    /// rate is converted to angular. Surfaced by `schema_help`.
    pub note: &'static str,
}

const fn req(name: &'static str, dim: Dimension, note: &'static str) -> KeySpec {
    KeySpec { name, dim, required: true, default: None, note }
}

const fn opt(name: &'static str, dim: Dimension, note: &'static str) -> KeySpec {
    KeySpec { name, dim, required: false, default: None, note }
}

const fn def(name: &'static str, dim: Dimension, default: f64, note: &'static str) -> KeySpec {
    KeySpec { name, dim, required: false, default: Some(default), note }
}

const ANGULAR: &str = "cyclic input, used internally as 2π × value";

/// Standard clock operating point, in the cyclic units of the config file.
const CLOCK_G3: f64 = 5e6;

const DISPERSIVE_Z_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("gamma", Rate, ANGULAR),
        req("chi", Rate, ANGULAR),
        opt("delta", Rate, "pump detuning; defaults to chi/2; cyclic → angular"),
        def("bandwidth_factor", Ratio, 0.03, "photon bandwidth as a fraction of gamma"),
    ]
};

const FIDELITY_SWEEP_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("gamma", Rate, ANGULAR),
        def("bandwidth_factor", Ratio, 0.03, "photon bandwidth as a fraction of gamma"),
        def("phi_min", Angle, 0.0, "first target rotation angle"),
        def("phi_max", Angle, std::f64::consts::PI, "last target rotation angle"),
        def("phi_samples", Count, 9.0, "number of target angles"),
        opt("chi", Rate, "swept search grid only — use a `sweep = chi : ...` line, not a scalar"),
    ]
};

const RYDBERG_CZ_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("rabi", Rate, ANGULAR),
        opt("blockade_ratio", Ratio, "V/Ω; omit for a hard (infinite) blockade"),
    ]
};

const LEVINE_PICHLER_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        opt("rabi", Rate, "drive strength; give this or pulse_duration; cyclic → angular"),
        opt(
            "pulse_duration",
            Time,
            "single-pulse length; the matching Rabi frequency is back-solved",
        ),
        def("detuning_ratio", Ratio, 0.377, "Δ/Ω of both pulses"),
    ]
};

const ULTRAFAST_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("exchange", Rate, ANGULAR),
        opt("duration", Time, "total evolution time; defaults to π/J (the π-phase point)"),
        def("samples", Count, 201.0, "recorded time points"),
    ]
};

const LASER_TIMING_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("delay", Time, "electronic/storage delay the optical path must match"),
        def("refractive_index", Ratio, 1.0, "group index of the delay medium"),
    ]
};

const MS_GATE_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        def("qubit_gap", Rate, 4.11e14, ANGULAR),
        def("mode_freq", Rate, 1.23e6, ANGULAR),
        def("detuning", Rate, 2e4, "drive offset from the sidebands; cyclic → angular"),
        def("lamb_dicke", Ratio, 0.05, "spin-motion coupling strength"),
        opt("rabi", Rate, "carrier Rabi; defaults to the loop-closure value detuning/(2η)"),
        def("n_max", Count, 10.0, "Fock truncation"),
        def("n_steps", Count, 8192.0, "integrator steps over one loop"),
    ]
};

const SLIDE_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("speed", Speed, "trap transport speed"),
        opt("exposure", Time, "laser exposure; give this or diameter"),
        opt("diameter", Length, "beam diameter; give this or exposure"),
        opt("rabi", Rate, "with detuning, adds the light-shift estimate; cyclic → angular"),
        opt("detuning", Rate, "drive detuning for the light shift; cyclic → angular"),
    ]
};

const RING_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("radius", Length, "trap ring radius"),
        req("chord", Length, "illuminated chord length"),
        req("rotation_freq", Rate, "revolutions per second; cyclic, used directly"),
        req("gate_duration", Time, "total drive window"),
        def("decay_rate", Rate, 0.0, "qubit decay during the drive; cyclic → angular"),
        opt("rabi", Rate, "drive strength; when given, the duty-cycled run is simulated"),
    ]
};

const CLOCK_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        def("omega_ge", Rate, 10e9, ANGULAR),
        def("omega_se", Rate, 6e9, ANGULAR),
        def("omega_c", Rate, 5e9, ANGULAR),
        def("omega_h", Rate, 15e9, ANGULAR),
        def("t_cold", Temperature, 0.1, "cold bath temperature"),
        def("t_hot", Temperature, 1.2, "hot bath temperature"),
        def("g3", Rate, CLOCK_G3, ANGULAR),
        def("kappa_c", Rate, 10.0 * CLOCK_G3, ANGULAR),
        def("kappa_h", Rate, 10.0 * CLOCK_G3, ANGULAR),
        def("gamma_es", Rate, 5.0 * CLOCK_G3, ANGULAR),
        def("gamma_sg", Rate, CLOCK_G3, ANGULAR),
        def("duration", Time, 1e-4, "length of the recorded tick trajectory"),
    ]
};

const XY_GATE_SCHEMA: &[KeySpec] = {
    use Dimension::*;
    &[
        req("chi", Rate, ANGULAR),
        req("g_ab", Rate, ANGULAR),
        req("gamma_c", Rate, "cavity decay; cyclic → angular"),
        def("n_max", Count, 3.0, "photon truncation"),
        opt("duration", Time, "run length; defaults to 12/γ_C (needs γ_C > 0)"),
        opt("bandwidth", Rate, "when given, the photon arrives as a pulse of this width"),
        opt("photon_detuning", Rate, "carrier offset of the injected pulse; cyclic → angular"),
    ]
};

pub fn schema(subcommand: &str) -> Option<&'static [KeySpec]> {
    match subcommand {
        "dispersive-z" => Some(DISPERSIVE_Z_SCHEMA),
        "fidelity-sweep" => Some(FIDELITY_SWEEP_SCHEMA),
        "rydberg-cz" => Some(RYDBERG_CZ_SCHEMA),
        "levine-pichler" => Some(LEVINE_PICHLER_SCHEMA),
        "ultrafast" => Some(ULTRAFAST_SCHEMA),
        "laser-timing" => Some(LASER_TIMING_SCHEMA),
        "ms-gate" => Some(MS_GATE_SCHEMA),
        "slide" => Some(SLIDE_SCHEMA),
        "ring" => Some(RING_SCHEMA),
        "clock" => Some(CLOCK_SCHEMA),
        "xy-gate" => Some(XY_GATE_SCHEMA),
        _ => None,
    }
}

/// All subcommand names with a schema, in dispatch order.
pub const SUBCOMMANDS: [&str; 11] = [
    "dispersive-z",
    "fidelity-sweep",
    "rydberg-cz",
    "levine-pichler",
    "ultrafast",
    "laser-timing",
    "ms-gate",
    "slide",
    "ring",
    "clock",
    "xy-gate",
];

/// One requested parameter scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    /// Bounds in the key's canonical unit.
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

/// A fully validated run request. Values are stored in canonical units
/// (Hz, s, K, m, m/s, rad); unit conversion back to the suffixes the user
/// wrote is *not* preserved — re-emission uses canonical units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub values: BTreeMap<String, f64>,
    pub sweep: Option<SweepSpec>,
    pub seed: u64,
    /// Output destination; chosen per invocation and excluded from
    /// [`emit_config`] (everything else round-trips).
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Value that the schema guarantees to exist (required or defaulted).
    pub fn expect(&self, key: &str) -> f64 {
        self.get(key).unwrap_or_else(|| panic!("schema guarantees `{key}`"))
    }

    pub fn count(&self, key: &str) -> usize {
        self.expect(key) as usize
    }
}

fn find_key(schema: &'static [KeySpec], name: &str) -> Option<&'static KeySpec> {
    schema.iter().find(|k| k.name == name)
}

/// Parse one `value [unit]` fragment. `resolved` supplies earlier keys for
/// key-reference units.
fn parse_quantity(
    fragment: &str,
    dim: Dimension,
    schema: &'static [KeySpec],
    resolved: &BTreeMap<String, f64>,
) -> Result<f64, String> {
    let mut parts = fragment.split_whitespace();
    let number = parts.next().ok_or_else(|| "missing value".to_string())?;
    let value: f64 = number
        .parse()
        .map_err(|_| format!("malformed number `{number}`"))?;
    if !value.is_finite() {
        return Err(format!("non-finite value `{number}`"));
    }
    let unit = parts.next();
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected trailing token `{extra}`"));
    }

    match (dim, unit) {
        (Dimension::Count, None) => {
            if value < 0.0 || value.fract() != 0.0 {
                Err(format!("`{number}` is not a non-negative integer"))
            } else {
                Ok(value)
            }
        }
        (Dimension::Count, Some(u)) => Err(format!("counts take no unit, found `{u}`")),
        (_, None) => {
            if value == 0.0 {
                Ok(0.0) // zero is the one unit-free physical quantity
            } else {
                Err(format!(
                    "missing unit (write e.g. `{}`)",
                    dim.example()
                ))
            }
        }
        (_, Some(u)) => {
            if let Some(scale) = dim.unit_scale(u) {
                return Ok(value * scale);
            }
            // A unit token may reference an earlier key of the same dimension.
            if let Some(spec) = find_key(schema, u) {
                if spec.dim != dim {
                    return Err(format!(
                        "`{u}` refers to a {:?} key and cannot scale a {:?} value",
                        spec.dim, dim
                    ));
                }
                return match resolved.get(u) {
                    Some(base) => Ok(value * base),
                    None => Err(format!("`{u}` must be defined before it is referenced")),
                };
            }
            Err(format!("unknown unit `{u}` for a {dim:?} quantity"))
        }
    }
}

/// Grammar: `<key> : <quantity> .. <quantity>, <n> samples`.
fn parse_sweep(
    fragment: &str,
    schema: &'static [KeySpec],
    resolved: &BTreeMap<String, f64>,
) -> Result<SweepSpec, String> {
    let (key, rest) = fragment
        .split_once(':')
        .ok_or_else(|| "sweep syntax is `key : min .. max, N samples`".to_string())?;
    let key = key.trim();
    let spec = find_key(schema, key)
        .ok_or_else(|| format!("cannot sweep unknown key `{key}`"))?;
    if spec.dim == Dimension::Count {
        return Err(format!("cannot sweep the count key `{key}`"));
    }

    let (range, tail) = rest
        .split_once(',')
        .ok_or_else(|| "sweep is missing `, N samples`".to_string())?;
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| "sweep range needs `min .. max`".to_string())?;
    let min = parse_quantity(lo.trim(), spec.dim, schema, resolved)
        .map_err(|e| format!("sweep minimum: {e}"))?;
    let max = parse_quantity(hi.trim(), spec.dim, schema, resolved)
        .map_err(|e| format!("sweep maximum: {e}"))?;
    if !(max >= min) {
        return Err(format!("sweep maximum {max} is below the minimum {min}"));
    }

    let mut tail_parts = tail.split_whitespace();
    let n: usize = tail_parts
        .next()
        .ok_or_else(|| "sweep is missing the sample count".to_string())?
        .parse()
        .map_err(|_| "sweep sample count is not an integer".to_string())?;
    if tail_parts.next() != Some("samples") || tail_parts.next().is_some() {
        return Err("sweep must end with `N samples`".to_string());
    }
    if n == 0 {
        return Err("sweep needs at least one sample".to_string());
    }

    Ok(SweepSpec { key: key.to_string(), min, max, samples: n })
}

/// Parse `text` for `subcommand`, validating everything and accumulating all
/// errors (each prefixed with its 1-based line number where one applies).
pub fn parse_config(text: &str, subcommand: &str) -> Result<RunConfig, Vec<String>> {
    let schema = match schema(subcommand) {
        Some(s) => s,
        None => return Err(vec![format!("unknown subcommand `{subcommand}`")]),
    };
    let canonical = SUBCOMMANDS
        .iter()
        .find(|s| **s == subcommand)
        .expect("schema() and SUBCOMMANDS agree");

    let mut errors = Vec::new();
    let mut values: BTreeMap<String, f64> = BTreeMap::new();
    let mut sweep = None;
    let mut seed = 0u64;
    let mut header_seen = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((content, _)) => content.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }

        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if header_seen {
                errors.push(format!("line {line_no}: second header `[{name}]`"));
            } else if name.trim() != subcommand {
                errors.push(format!(
                    "line {line_no}: config is for `{}`, but this run is `{subcommand}`",
                    name.trim()
                ));
            }
            header_seen = true;
            continue;
        }

        let (key, rest) = match line.split_once('=') {
            Some((k, r)) => (k.trim(), r.trim()),
            None => {
                errors.push(format!("line {line_no}: expected `key = value`, got `{line}`"));
                continue;
            }
        };

        if !header_seen {
            errors.push(format!(
                "line {line_no}: missing `[{subcommand}]` header before the first key"
            ));
            header_seen = true; // report only once
        }

        if key == "seed" {
            match rest.parse::<u64>() {
                Ok(s) => seed = s,
                Err(_) => {
                    errors.push(format!("line {line_no}: seed must be a non-negative integer"))
                }
            }
            continue;
        }
        if key == "sweep" {
            match parse_sweep(rest, schema, &values) {
                Ok(s) => {
                    if sweep.replace(s).is_some() {
                        errors.push(format!("line {line_no}: more than one sweep line"));
                    }
                }
                Err(e) => errors.push(format!("line {line_no}: {e}")),
            }
            continue;
        }

        let spec = match find_key(schema, key) {
            Some(s) => s,
            None => {
                errors.push(format!(
                    "line {line_no}: unknown key `{key}` for `{subcommand}`"
                ));
                continue;
            }
        };
        if values.contains_key(key) {
            errors.push(format!("line {line_no}: `{key}` was already set"));
            continue;
        }
        match parse_quantity(rest, spec.dim, schema, &values) {
            Ok(v) => {
                values.insert(key.to_string(), v);
            }
            Err(e) => errors.push(format!("line {line_no}: {key}: {e}")),
        }
    }

    if !header_seen {
        errors.push(format!("config is empty; start with `[{subcommand}]`"));
    }

    for spec in schema {
        if values.contains_key(spec.name) {
            continue;
        }
        if let Some(v) = spec.default {
            values.insert(spec.name.to_string(), v);
        } else if spec.required {
            errors.push(format!(
                "missing required key `{}` ({:?}, e.g. `{} = {}`)",
                spec.name,
                spec.dim,
                spec.name,
                spec.dim.example()
            ));
        }
    }

    if let Some(s) = &sweep {
        // A swept key needs no standalone line; drop any duplicate because the
        // sweep value replaces it point by point.
        let _ = s;
    }

    if errors.is_empty() {
        Ok(RunConfig {
            subcommand: canonical,
            values,
            sweep,
            seed,
            out: None,
        })
    } else {
        Err(errors)
    }
}

/// Render a config in canonical units with full float precision. Everything
/// except the output path round-trips: `parse_config(&emit_config(c)) == c`.
pub fn emit_config(cfg: &RunConfig) -> String {
    let schema = schema(cfg.subcommand).expect("config was built against a schema");
    let mut out = format!("[{}]\n", cfg.subcommand);
    let _ = writeln!(out, "seed = {}", cfg.seed);
    for (key, value) in &cfg.values {
        let dim = find_key(schema, key).map(|s| s.dim).expect("key came from this schema");
        match dim {
            Dimension::Count => {
                let _ = writeln!(out, "{key} = {}", *value as u64);
            }
            _ => {
                let _ = writeln!(out, "{key} = {value:.17e} {}", dim.canonical_unit());
            }
        }
    }
    if let Some(s) = &cfg.sweep {
        let dim = find_key(schema, &s.key).map(|k| k.dim).expect("sweep key is in the schema");
        let unit = dim.canonical_unit();
        let _ = writeln!(
            out,
            "sweep = {} : {:.17e} {unit} .. {:.17e} {unit}, {} samples",
            s.key, s.min, s.max, s.samples
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file_resolves_units_and_references() {
        let text = "\
# demo configuration
[dispersive-z]
seed = 7
gamma = 100 MHz      # cyclic
chi = 0.5 gamma      # key reference
delta = 0
bandwidth_factor = 0.04 dimensionless
";
        let cfg = parse_config(text, "dispersive-z").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.expect("gamma"), 1e8);
        assert_eq!(cfg.expect("chi"), 5e7);
        assert_eq!(cfg.expect("delta"), 0.0);
        assert_eq!(cfg.expect("bandwidth_factor"), 0.04);
        assert!(cfg.sweep.is_none());
        assert!(cfg.out.is_none());
    }

    #[test]
    fn defaults_fill_in_missing_keys() {
        let cfg = parse_config("[ms-gate]\n", "ms-gate").unwrap();
        assert_eq!(cfg.expect("mode_freq"), 1.23e6);
        assert_eq!(cfg.count("n_max"), 10);
        assert_eq!(cfg.count("n_steps"), 8192);
        assert!(cfg.get("rabi").is_none(), "optional key stays unset");
    }

    #[test]
    fn every_error_is_reported_with_its_line() {
        let text = "\
[dispersive-z]
gamma = 100 MHz
gamma = 2 GHz
chi = fast MHz
delta = 3 parsec
junk = 1 Hz
chi = 1
";
        let errors = parse_config(text, "dispersive-z").unwrap_err();
        let joined = errors.join("\n");
        assert!(joined.contains("line 3: `gamma` was already set"), "{joined}");
        assert!(joined.contains("line 4: chi: malformed number `fast`"), "{joined}");
        assert!(joined.contains("line 5: delta: unknown unit `parsec`"), "{joined}");
        assert!(joined.contains("line 6: unknown key `junk`"), "{joined}");
        assert!(joined.contains("line 7: chi: missing unit"), "{joined}");
        // `chi` never resolved, so the required-key scan reports it too.
        assert!(joined.contains("missing required key `chi`"), "{joined}");
        assert_eq!(errors.len(), 6, "{joined}");
    }

    #[test]
    fn empty_file_lists_all_required_keys() {
        let errors = parse_config("", "dispersive-z").unwrap_err();
        let joined = errors.join("\n");
        assert!(joined.contains("config is empty"), "{joined}");
        assert!(joined.contains("missing required key `gamma`"), "{joined}");
        assert!(joined.contains("missing required key `chi`"), "{joined}");
    }

    #[test]
    fn header_must_match_the_subcommand() {
        let errors = parse_config("[slide]\ngamma = 1 Hz\n", "dispersive-z").unwrap_err();
        assert!(errors[0].contains("config is for `slide`"), "{errors:?}");
    }

    #[test]
    fn counts_reject_units_and_fractions() {
        let bad = parse_config("[ultrafast]\nexchange = 1 MHz\nsamples = 10 Hz\n", "ultrafast")
            .unwrap_err();
        assert!(bad[0].contains("counts take no unit"), "{bad:?}");
        let bad = parse_config("[ultrafast]\nexchange = 1 MHz\nsamples = 2.5\n", "ultrafast")
            .unwrap_err();
        assert!(bad[0].contains("not a non-negative integer"), "{bad:?}");
    }

    #[test]
    fn forward_key_references_are_rejected() {
        let errors =
            parse_config("[dispersive-z]\nchi = 0.5 gamma\ngamma = 1 MHz\n", "dispersive-z")
                .unwrap_err();
        assert!(
            errors[0].contains("`gamma` must be defined before it is referenced"),
            "{errors:?}"
        );
    }

    #[test]
    fn sweep_line_parses_with_key_reference_bounds() {
        let text = "\
[fidelity-sweep]
gamma = 2 MHz
sweep = gamma : 1 MHz .. 10 gamma, 4 samples
";
        let cfg = parse_config(text, "fidelity-sweep").unwrap();
        let sweep = cfg.sweep.clone().unwrap();
        assert_eq!(sweep.key, "gamma");
        assert_eq!(sweep.samples, 4);
        assert_eq!(sweep.min, 1e6);
        assert_eq!(sweep.max, 2e7); // 10 × the 2 MHz reference
    }

    #[test]
    fn sweep_grammar_errors_are_line_tagged() {
        let check = |line: &str, needle: &str| {
            let text = format!("[fidelity-sweep]\ngamma = 1 MHz\n{line}\n");
            let errors = parse_config(&text, "fidelity-sweep").unwrap_err();
            assert!(errors[0].starts_with("line 3:"), "{errors:?}");
            assert!(errors[0].contains(needle), "{errors:?}");
        };
        check("sweep = chi 0 .. 1 Hz, 2 samples", "sweep syntax");
        check("sweep = phi_samples : 0 .. 9, 2 samples", "cannot sweep the count key");
        check("sweep = gamma : 5 MHz .. 1 MHz, 2 samples", "below the minimum");
        check("sweep = gamma : 0 .. 1 MHz, 0 samples", "at least one sample");
        check("sweep = gamma : 0 .. 1 MHz, 2 points", "must end with `N samples`");
    }

    #[test]
    fn emitted_config_round_trips_exactly() {
        let text = "\
[fidelity-sweep]
seed = 99
gamma = 137.035999 kHz
bandwidth_factor = 0.03 dimensionless
phi_max = 0.75 pi
sweep = gamma : 0 .. 17.3 gamma, 11 samples
";
        let cfg = parse_config(text, "fidelity-sweep").unwrap();
        let emitted = emit_config(&cfg);
        let reparsed = parse_config(&emitted, "fidelity-sweep").unwrap();
        assert_eq!(cfg, reparsed);
        // And emission is a fixed point.
        assert_eq!(emitted, emit_config(&reparsed));
    }

    #[test]
    fn schema_help_names_every_key() {
        let help = schema_help("clock").unwrap();
        for key in
            ["omega_ge", "t_hot", "g3", "kappa_c", "gamma_sg", "duration", "seed", "sweep"]
        {
            assert!(help.contains(key), "{help}");
        }
        assert!(schema_help("no-such-command").is_none());
    }
}

/// Human-readable key list for a subcommand: dimensions, defaults, and the
/// angular/cyclic reading of every key.
pub fn schema_help(subcommand: &str) -> Option<String> {
    let schema = schema(subcommand)?;
    let mut out = format!("[{subcommand}] keys:\n");
    for spec in schema {
        let kind = if spec.required {
            "required".to_string()
        } else if let Some(d) = spec.default {
            format!("default {d}")
        } else {
            "optional".to_string()
        };
        let _ = writeln!(
            out,
            "  {:<16} {:?}{} ({kind}) — {}",
            spec.name,
            spec.dim,
            if spec.dim.canonical_unit().is_empty() {
                String::new()
            } else {
                format!(" [{}]", spec.dim.canonical_unit())
            },
            spec.note
        );
    }
    out.push_str("  seed             Count (default 0) — RNG seed; --seed overrides\n");
    out.push_str("  sweep            optional `key : min .. max, N samples` scan\n");
    Some(out)
}
