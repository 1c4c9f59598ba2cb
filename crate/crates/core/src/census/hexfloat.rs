//! Exact text form of `f64` values, `[-]0x1.<hex>p<exp>`.

/// Shortest exact hexadecimal rendering; infinities and NaN are spelled
/// `inf`, `-inf` and `nan`.
pub fn to_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    let dot = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    format!("{sign}0x{lead}{dot}p{e:+}")
}

pub fn from_hex(s: &str) -> Result<f64, String> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => hexf_parse::parse_hexf64(s, false).map_err(|e| format!("hex float `{s}`: {e}")),
    }
}

/// Serde adapters for `f64` and `Vec<f64>` fields stored as hex strings.
pub mod serde_hex {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_hex(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        super::from_hex(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&super::super::to_hex(*x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| super::super::from_hex(s).map_err(serde::de::Error::custom)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(to_hex(1.0), "0x1p+0");
        assert_eq!(to_hex(-0.5), "-0x1p-1");
        assert_eq!(to_hex(0.0), "0x0p+0");
        assert_eq!(to_hex(std::f64::consts::PI), "0x1.921fb54442d18p+1");
        assert_eq!(to_hex(f64::MIN_POSITIVE / 2.0), "0x0.8p-1022");
    }

    #[test]
    fn round_trip() {
        for x in [1.0, -3.25, 1e-300, 5e-324, f64::MAX, 10.428602, -0.0, f64::INFINITY] {
            let back = from_hex(&to_hex(x)).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
        assert!(from_hex("nan").unwrap().is_nan());
    }
}
