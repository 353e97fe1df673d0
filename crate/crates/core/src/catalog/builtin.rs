use super::system::{parse_system, SystemSpec};
use crate::error::{Error, Result};

pub const SL2R: &str = "\
system sl2r
dim 2
oneforms w1 w2 w3
pseudos y1 y2
connection [[w1, w2], [w3, -w1]]
curvature auto
";

pub const O3: &str = "\
system o3
dim 3
oneforms w1 w2 w3
pseudos y1 y2 y3
connection [[0, -w1, w2], [w1, 0, -w3], [-w2, w3, 0]]
curvature auto
";

pub const SU3: &str = "\
system su3
dim 3
oneforms w1 w2 w3 w4 w5 w6 w7 w8
pseudos y1 y2 y3
connection [[w3 + 1/3*sqrt3*w8, w1 - i*w2, w4 - i*w5],
            [w1 + i*w2, -w3 + 1/3*sqrt3*w8, w6 - i*w7],
            [w4 + i*w5, w6 + i*w7, -2/3*sqrt3*w8]]
curvature auto
";

pub const BUILTIN_NAMES: [&str; 3] = ["sl2r", "o3", "su3"];

pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "sl2r" => Some(SL2R),
        "o3" => Some(O3),
        "su3" => Some(SU3),
        _ => None,
    }
}

/// One of the built-in systems by name.
pub fn load_system(name: &str) -> Result<SystemSpec> {
    let text = builtin_text(name).ok_or_else(|| Error::UnknownSystem(name.to_string()))?;
    parse_system(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::gellmann::{su3_assemble, GellMannData};
    use crate::catalog::system::Algebra;
    use crate::exterior::{FormExpr, Gen};

    #[test]
    fn sl2_connection() {
        let s = load_system("sl2r").unwrap();
        assert_eq!(s.connection.to_string(), "[[w1, w2], [w3, -w1]]");
        assert_eq!(s.algebra, Algebra::Sl2r);
    }

    #[test]
    fn o3_connection() {
        let s = load_system("o3").unwrap();
        assert_eq!(s.connection.to_string(), "[[0, -w1, w2], [w1, 0, -w3], [-w2, w3, 0]]");
    }

    #[test]
    fn su3_entry_and_assembly() {
        let s = load_system("su3").unwrap();
        assert_eq!(s.connection.get(0, 2).to_string(), "w4 - i*w5");
        let w: Vec<FormExpr> = s.oneforms.iter().cloned().map(FormExpr::gen).collect();
        assert_eq!(su3_assemble(&GellMannData::standard(), &w).unwrap(), s.connection);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(load_system("so5"), Err(Error::UnknownSystem("so5".into())));
    }

    #[test]
    fn d_squared_vanishes_on_tables() {
        for name in BUILTIN_NAMES {
            let s = load_system(name).unwrap();
            assert!(s.table.d_squared_failures().unwrap().is_empty(), "{}", name);
            assert!(s.connection.trace().unwrap().is_zero());
        }
    }

    #[test]
    fn su3_table_matches_structure_constants() {
        let s = load_system("su3").unwrap();
        let g = GellMannData::standard();
        let w: Vec<FormExpr> = s.oneforms.iter().cloned().map(FormExpr::gen).collect();
        for l in 1..=8 {
            let th = FormExpr::gen(Gen::theta(&format!("th{}", l)));
            assert_eq!(s.d_omega(l - 1), &g.structure_equation(l, &w, &th), "dw{}", l);
        }
    }
}
