use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A named real constant. All constants except `eps` are algebraically
/// independent; `eps` satisfies `eps^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Constant {
    Hbar,
    Eps,
    Alpha(u8),
    Beta,
    BetaN(u8),
    C(u8),
}

impl Constant {
    pub const ALPHA7: Constant = Constant::Alpha(7);
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Hbar => write!(f, "hbar"),
            Constant::Eps => write!(f, "eps"),
            Constant::Alpha(n) => write!(f, "alpha{n}"),
            Constant::Beta => write!(f, "beta"),
            Constant::BetaN(n) => write!(f, "beta{n}"),
            Constant::C(n) => write!(f, "c{n}"),
        }
    }
}

fn indexed(s: &str, prefix: &str) -> Option<u8> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

impl FromStr for Constant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hbar" => return Ok(Constant::Hbar),
            "eps" => return Ok(Constant::Eps),
            "beta" => return Ok(Constant::Beta),
            _ => {}
        }
        if let Some(n) = indexed(s, "alpha") {
            return Ok(Constant::Alpha(n));
        }
        if let Some(n) = indexed(s, "beta") {
            return Ok(Constant::BetaN(n));
        }
        if let Some(n) = indexed(s, "c") {
            return Ok(Constant::C(n));
        }
        Err(format!("unknown constant `{s}`"))
    }
}

/// Name of a formal function of `r`: potentials `V0..V5` and weights `f1..f10`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FuncName {
    V(u8),
    F(u8),
}

impl fmt::Display for FuncName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncName::V(n) => write!(f, "V{n}"),
            FuncName::F(n) => write!(f, "f{n}"),
        }
    }
}

impl FromStr for FuncName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_idx = |rest: &str| -> Option<u8> {
            if rest.is_empty() || (rest.len() > 1 && rest.starts_with('0')) {
                return None;
            }
            rest.parse().ok()
        };
        if let Some(n) = s.strip_prefix('V').and_then(parse_idx) {
            return Ok(FuncName::V(n));
        }
        if let Some(n) = s.strip_prefix('f').and_then(parse_idx) {
            return Ok(FuncName::F(n));
        }
        Err(format!("unknown function symbol `{s}`"))
    }
}

/// The `order`-th radial derivative of a named function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSym {
    pub name: FuncName,
    pub order: u8,
}

impl FuncSym {
    pub fn new(name: FuncName, order: u8) -> Self {
        FuncSym { name, order }
    }

    pub fn base(name: FuncName) -> Self {
        FuncSym { name, order: 0 }
    }

    pub fn derivative(self) -> Self {
        FuncSym { name: self.name, order: self.order + 1 }
    }
}

impl fmt::Display for FuncSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for _ in 0..self.order {
            write!(f, "'")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_names_round_trip() {
        for name in ["hbar", "eps", "alpha7", "alpha26", "beta", "beta1", "c11"] {
            let c: Constant = name.parse().unwrap();
            assert_eq!(c.to_string(), name);
        }
        assert!("alpha".parse::<Constant>().is_err());
        assert!("alpha07".parse::<Constant>().is_err());
        assert!("gamma".parse::<Constant>().is_err());
    }

    #[test]
    fn function_names() {
        assert_eq!("V5".parse::<FuncName>(), Ok(FuncName::V(5)));
        assert_eq!("f10".parse::<FuncName>(), Ok(FuncName::F(10)));
        assert_eq!(FuncSym::new(FuncName::V(5), 2).to_string(), "V5''");
    }
}
