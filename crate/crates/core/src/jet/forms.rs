use super::series::{Series, Trunc, Var};
use crate::error::JetError;

/// Kind of a differential object on R³.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffKind {
    Function,
    OneForm,
    TwoForm,
    ThreeForm,
    Vector,
    Bivector,
}

impl DiffKind {
    pub fn len(self) -> usize {
        match self {
            DiffKind::Function | DiffKind::ThreeForm => 1,
            _ => 3,
        }
    }

    /// Form degree, `None` for multivectors.
    pub fn form_degree(self) -> Option<u8> {
        match self {
            DiffKind::Function => Some(0),
            DiffKind::OneForm => Some(1),
            DiffKind::TwoForm => Some(2),
            DiffKind::ThreeForm => Some(3),
            _ => None,
        }
    }

    fn of_degree(d: u8) -> DiffKind {
        match d {
            0 => DiffKind::Function,
            1 => DiffKind::OneForm,
            2 => DiffKind::TwoForm,
            _ => DiffKind::ThreeForm,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DiffKind::Function => "function",
            DiffKind::OneForm => "1-form",
            DiffKind::TwoForm => "2-form",
            DiffKind::ThreeForm => "3-form",
            DiffKind::Vector => "vector",
            DiffKind::Bivector => "bivector",
        }
    }

    /// Basis labels in storage order.
    pub fn basis(self) -> &'static [&'static str] {
        match self {
            DiffKind::Function => &["1"],
            DiffKind::OneForm => &["dx", "dy", "dz"],
            DiffKind::TwoForm => &["dy^dz", "dz^dx", "dx^dy"],
            DiffKind::ThreeForm => &["dx^dy^dz"],
            DiffKind::Vector => &["d/dx", "d/dy", "d/dz"],
            DiffKind::Bivector => &["d/dy^d/dz", "d/dz^d/dx", "d/dx^d/dy"],
        }
    }
}

/// A differential form or multivector with series components in the fixed
/// basis `dx, dy, dz` / `dy∧dz, dz∧dx, dx∧dy` / `∂x, ∂y, ∂z` /
/// `∂y∧∂z, ∂z∧∂x, ∂x∧∂y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffObject {
    kind: DiffKind,
    comps: Vec<Series>,
}

impl DiffObject {
    pub fn new(kind: DiffKind, comps: Vec<Series>) -> Result<Self, JetError> {
        if comps.len() != kind.len() {
            return Err(JetError::WrongKind { expected: kind.name(), got: "wrong component count" });
        }
        let t = comps[0].trunc();
        if let Some(s) = comps.iter().find(|s| s.trunc() != t) {
            return Err(JetError::TruncMismatch { left: t, right: s.trunc() });
        }
        Ok(DiffObject { kind, comps })
    }

    pub fn function(f: Series) -> Self {
        DiffObject { kind: DiffKind::Function, comps: vec![f] }
    }

    pub fn triple(kind: DiffKind, c: [Series; 3]) -> Self {
        assert_eq!(kind.len(), 3, "triple() needs a three-component kind");
        DiffObject { kind, comps: c.into() }
    }

    pub fn zero(kind: DiffKind, trunc: Trunc) -> Self {
        DiffObject { kind, comps: vec![Series::zero(trunc); kind.len()] }
    }

    pub fn kind(&self) -> DiffKind {
        self.kind
    }

    pub fn comps(&self) -> &[Series] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Series {
        &self.comps[i]
    }

    pub fn trunc(&self) -> Trunc {
        self.comps[0].trunc()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Series::is_zero)
    }

    /// Drops components' terms of space degree `>= d`.
    pub fn below(&self, d: u32) -> DiffObject {
        DiffObject {
            kind: self.kind,
            comps: self.comps.iter().map(|s| s.jet(d.saturating_sub(1))).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> DiffObject {
        DiffObject { kind: self.kind, comps: self.comps.iter().map(f).collect() }
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<DiffObject, JetError> {
        let c = &self.comps;
        match self.kind {
            DiffKind::Function => Ok(DiffObject::triple(
                DiffKind::OneForm,
                [c[0].partial(Var::X), c[0].partial(Var::Y), c[0].partial(Var::Z)],
            )),
            DiffKind::OneForm => Ok(DiffObject::triple(
                DiffKind::TwoForm,
                [
                    &c[2].partial(Var::Y) - &c[1].partial(Var::Z),
                    &c[0].partial(Var::Z) - &c[2].partial(Var::X),
                    &c[1].partial(Var::X) - &c[0].partial(Var::Y),
                ],
            )),
            DiffKind::TwoForm => Ok(DiffObject {
                kind: DiffKind::ThreeForm,
                comps: vec![&(&c[0].partial(Var::X) + &c[1].partial(Var::Y)) + &c[2].partial(Var::Z)],
            }),
            DiffKind::ThreeForm => Err(JetError::TopDegree),
            k => Err(JetError::WrongKind { expected: "differential form", got: k.name() }),
        }
    }

    /// Exterior product.
    pub fn wedge(&self, o: &DiffObject) -> Result<DiffObject, JetError> {
        let (p, q) = match (self.kind.form_degree(), o.kind.form_degree()) {
            (Some(p), Some(q)) => (p, q),
            (None, _) => return Err(JetError::WrongKind { expected: "differential form", got: self.kind.name() }),
            (_, None) => return Err(JetError::WrongKind { expected: "differential form", got: o.kind.name() }),
        };
        if p + q > 3 {
            return Err(JetError::FormDegree(p, q));
        }
        let a = &self.comps;
        let b = &o.comps;
        let kind = DiffKind::of_degree(p + q);
        let comps = match (p, q) {
            (0, _) => b.iter().map(|s| &a[0] * s).collect(),
            (_, 0) => a.iter().map(|s| s * &b[0]).collect(),
            (1, 1) => vec![
                &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
                &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
                &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
            ],
            // 1∧2 and 2∧1 both pair dx with dy∧dz and so on.
            _ => vec![&(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])],
        };
        Ok(DiffObject { kind, comps })
    }
}
