use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Member,
    /// No violation found on a finite sample; not a proof.
    MemberSampled,
    NonMember,
    Undetermined,
}

impl Status {
    pub fn is_member(self) -> bool {
        matches!(self, Status::Member | Status::MemberSampled)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Member => "member",
            Status::MemberSampled => "member-sampled",
            Status::NonMember => "non-member",
            Status::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Routh,
    Sturm,
    CompanionRoots,
    Sampling,
}

/// A point (a root, or a sample in variable order) and the value of the
/// tested function there.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: Vec<Complex64>,
    pub value: Complex64,
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that does not follow an exponent marker
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse().ok()?;
            let im = match &body[k..] {
                "+" => 1.0,
                "-" => -1.0,
                t => t.parse().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                t => t.parse().ok()?,
            };
            Some(Complex64::new(0.0, im))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    point: Vec<String>,
    value: String,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WitnessJson {
            point: self.point.iter().copied().map(format_complex).collect(),
            value: format_complex(self.value),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = WitnessJson::deserialize(d)?;
        let parse = |t: &str| parse_complex(t).ok_or_else(|| D::Error::custom(format!("bad complex number `{t}`")));
        Ok(Witness {
            point: j.point.iter().map(|t| parse(t)).collect::<Result<_, _>>()?,
            value: parse(&j.value)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub status: Status,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Sign applied during normalization, when one was.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ClassVerdict {
    pub fn member(method: Method) -> Self {
        ClassVerdict { status: Status::Member, method, witness: None, sign: None, reason: None }
    }

    pub fn member_sampled(method: Method) -> Self {
        ClassVerdict { status: Status::MemberSampled, ..Self::member(method) }
    }

    pub fn non_member(method: Method, witness: Option<Witness>) -> Self {
        ClassVerdict { status: Status::NonMember, witness, ..Self::member(method) }
    }

    pub fn undetermined(method: Method, reason: impl Into<String>) -> Self {
        ClassVerdict { status: Status::Undetermined, reason: Some(reason.into()), ..Self::member(method) }
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = Some(sign);
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serialization is infallible")
    }
}
