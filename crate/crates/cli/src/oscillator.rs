//! Command-line parsing of oscillator state specifications.

use mucs::squeezing::StateSpec;
use mucs::c64;

/// Parses `vacuum`, `coherent:RE[,IM]` or `number:N`.
pub fn parse_state_spec(text: &str) -> Result<StateSpec, String> {
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (text.trim(), None),
    };
    match (name, arg) {
        ("vacuum", None) => Ok(StateSpec::Vacuum),
        ("number", Some(n)) => n.parse().map(StateSpec::Number).map_err(|_| format!("bad number-state level `{n}`")),
        ("coherent", Some(a)) => {
            let (re, im) = a.split_once(',').unwrap_or((a, "0"));
            let re: f64 = re.trim().parse().map_err(|_| format!("bad real part `{re}`"))?;
            let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part `{im}`"))?;
            if !(re.is_finite() && im.is_finite()) {
                return Err("coherent amplitude must be finite".into());
            }
            Ok(StateSpec::Coherent(c64(re, im)))
        }
        _ => Err(format!("state `{text}` is not `vacuum`, `coherent:RE[,IM]` or `number:N`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse() {
        assert_eq!(parse_state_spec("vacuum").unwrap(), StateSpec::Vacuum);
        assert_eq!(parse_state_spec("number:3").unwrap(), StateSpec::Number(3));
        assert_eq!(parse_state_spec("coherent:2").unwrap(), StateSpec::Coherent(c64(2.0, 0.0)));
        assert_eq!(parse_state_spec("coherent:1.5,-0.5").unwrap(), StateSpec::Coherent(c64(1.5, -0.5)));
        for bad in ["", "vacuum:1", "number", "number:-1", "coherent:x", "coherent:nan", "squeezed:1"] {
            assert!(parse_state_spec(bad).is_err(), "{bad}");
        }
    }
}
