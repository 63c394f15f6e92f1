//! Scenario files shipped with the crate.

/// `(name, contents)` of every shipped scenario.
pub const SCENARIOS: &[(&str, &str)] = &[
    ("fig1", include_str!("../../scenarios/fig1.conf")),
    ("fig2", include_str!("../../scenarios/fig2.conf")),
    ("fig3", include_str!("../../scenarios/fig3.conf")),
    ("fig4", include_str!("../../scenarios/fig4.conf")),
    ("fig5", include_str!("../../scenarios/fig5.conf")),
    ("fig8", include_str!("../../scenarios/fig8.conf")),
    ("fig9", include_str!("../../scenarios/fig9.conf")),
    ("table1", include_str!("../../scenarios/table1.conf")),
    ("eq20", include_str!("../../scenarios/eq20.conf")),
    ("qed", include_str!("../../scenarios/qed.conf")),
    ("gravity", include_str!("../../scenarios/gravity.conf")),
    ("zeno", include_str!("../../scenarios/zeno.conf")),
    ("chiral", include_str!("../../scenarios/chiral.conf")),
];

pub fn scenario(name: &str) -> Option<&'static str> {
    SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

/// First comment line of a scenario.
pub fn scenario_summary(text: &str) -> &str {
    text.lines()
        .find_map(|l| l.strip_prefix('#'))
        .map(str::trim)
        .unwrap_or("")
}
