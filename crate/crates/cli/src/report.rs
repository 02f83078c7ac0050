use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1.0";

/// How a numeric value in `results` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Exact evaluation of the defining operation.
    Computed,
    /// A closed-form expression in `g`, checked against the computation.
    ClosedForm,
    /// A value whose normalization depends on an unresolved convention.
    Convention,
}

/// `{"value": …, "basis": …}`.
pub fn claim<T: Serialize>(value: T, basis: Basis) -> Value {
    json!({ "value": value, "basis": basis })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Citation {
    pub location: String,
    pub quote: String,
}

impl Citation {
    pub fn new(location: &str, quote: &str) -> Self {
        Self { location: location.into(), quote: quote.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub citations: Vec<Citation>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, mut citations: Vec<Citation>) -> Self {
        citations.sort();
        citations.dedup();
        Self { schema_version: SCHEMA_VERSION, command: command.into(), inputs, results, citations }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

pub mod cite {
    use super::Citation;

    pub fn mukai_pairing() -> Citation {
        Citation::new("Mukai pairing on H⁰ ⊕ Z·h ⊕ H⁴", "⟨(r,a,s),(r',a',s')⟩ = a·a'·(2g−2) − r·s' − r'·s")
    }

    pub fn reflection() -> Citation {
        Citation::new("spherical twist action on the Mukai lattice", "v ↦ v + ⟨v,s⟩·s")
    }

    pub fn theta() -> Citation {
        Citation::new("Mukai morphism for v = (1,0,1−g)", "H̃ = θ(0,−1,0), B = θ(−1,0,1−g)")
    }

    pub fn dimension() -> Citation {
        Citation::new("dimension of moduli of stable sheaves", "dim M(v) = ⟨v,v⟩ + 2")
    }

    pub fn movable_cone() -> Citation {
        Citation::new(
            "chamber structure of Mov(Hilb^g)",
            "Mov(Hilb^g) = ⟨H̃, H̃ − B⟩ with walls H̃, H̃ − (2g−2)/(2g−1)·B, H̃ − B",
        )
    }

    pub fn bb_form() -> Citation {
        Citation::new("Beauville–Bogomolov form on ⟨H̃, B⟩", "q(x·H̃ − y·B) = (2g−2)(x² − y²)")
    }

    pub fn bm_chain() -> Citation {
        Citation::new(
            "Bayer–Macrì ample classes on Picbar^{−g}",
            "w = (1, −(2g−1)/(2g−2), g − (g−1)t²), reflected through s = (1,−1,g), t² > 1/(g−1)",
        )
    }

    pub fn pell() -> Citation {
        Citation::new("Pell-type equation for nef boundaries", "X² − d·Y² = 5")
    }

    pub fn brauer() -> Citation {
        Citation::new("Brauer class of Picbar^d", "α_d^{2g−2} = α_d^{d+1−g} = 1")
    }

    pub fn theorem_b() -> Citation {
        Citation::new(
            "non-birational derived-equivalent pair",
            "disc NS(Picbar^0) = −4, disc NS(Picbar^{g−1}) = −1",
        )
    }

    pub fn justification(j: &k3moduli::moduli::Justification) -> Citation {
        Citation::new(j.location, j.quote)
    }
}
