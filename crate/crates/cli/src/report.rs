use std::fmt::{self, Write as _};

use dbrepair::{apply_repair, PreferenceCriterion, Repair, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The input already satisfies its constraints.
    Consistent,
    Repaired,
    /// The node budget ran out; the listed repairs are what was found.
    Partial,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Consistent => "consistent",
            Status::Repaired => "repaired",
            Status::Partial => "partial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairEntry {
    pub insert: Vec<String>,
    pub retract: Vec<String>,
    /// The repaired instance.
    pub instance: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairReport {
    pub criterion: String,
    pub status: Status,
    pub repairs: Vec<RepairEntry>,
}

impl RepairReport {
    /// `repairs` must already be in canonical order.
    pub fn new(
        db: &dbrepair::Database,
        criterion: PreferenceCriterion,
        repairs: &[Repair],
        partial: bool,
    ) -> Result<Self> {
        let status = if partial {
            Status::Partial
        } else if repairs.len() == 1 && repairs[0].is_empty() {
            Status::Consistent
        } else {
            Status::Repaired
        };
        let strings = |it: &mut dyn Iterator<Item = &dbrepair::GroundAtom>| {
            it.map(ToString::to_string).collect::<Vec<_>>()
        };
        let repairs = repairs
            .iter()
            .map(|r| {
                let repaired = apply_repair(db, r)?;
                Ok(RepairEntry {
                    insert: strings(&mut r.insert.iter()),
                    retract: strings(&mut r.retract.iter()),
                    instance: strings(&mut repaired.instance.iter()),
                })
            })
            .collect::<Result<_>>()?;
        Ok(RepairReport {
            criterion: criterion.to_string(),
            status,
            repairs,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "criterion: {}", self.criterion);
        let _ = writeln!(s, "status: {}", self.status);
        for (i, r) in self.repairs.iter().enumerate() {
            let _ = writeln!(
                s,
                "repair {}: ({{{}}}, {{{}}})",
                i + 1,
                r.insert.join(", "),
                r.retract.join(", ")
            );
            let _ = writeln!(s, "  instance: {{{}}}", r.instance.join(", "));
        }
        s
    }
}
