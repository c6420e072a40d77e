//! Bundled example graphs of groups.

pub const MODG: &str = include_str!("../../../fixtures/modg.gog");
pub const SL2Z: &str = include_str!("../../../fixtures/sl2z.gog");
pub const ZHNN: &str = include_str!("../../../fixtures/zhnn.gog");
pub const ZSTAR: &str = include_str!("../../../fixtures/zstar.gog");

pub fn by_name(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "modg" => Some(MODG),
        "sl2z" => Some(SL2Z),
        "zhnn" => Some(ZHNN),
        "zstar" => Some(ZSTAR),
        _ => None,
    }
}
