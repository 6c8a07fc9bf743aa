//! Bundled reproduction recipes, embedded at compile time.

pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    pub json: &'static str,
}

pub const RECIPES: &[Recipe] = &[
    Recipe {
        name: "fig2",
        description: "handover probability vs range-expansion bias (15/30/45 m serving distances)",
        json: include_str!("../assets/fig2.json"),
    },
    Recipe {
        name: "fig3",
        description: "received-power CDF from a random picocell, shadowing 6-12 dB",
        json: include_str!("../assets/fig3.json"),
    },
    Recipe {
        name: "fig4",
        description: "aggregate interference CCDF: pico tier, plus macro, and coordinated tier",
        json: include_str!("../assets/fig4.json"),
    },
    Recipe {
        name: "fig5",
        description: "received-power CDF from the umbrella macrocell, shadowing 6-12 dB",
        json: include_str!("../assets/fig5.json"),
    },
    Recipe {
        name: "fig7",
        description: "outage probability vs picocell density for ES1-ES5",
        json: include_str!("../assets/fig7.json"),
    },
    Recipe {
        name: "fig8",
        description: "average channel capacity vs picocell density for ES2-ES5",
        json: include_str!("../assets/fig8.json"),
    },
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    RECIPES.iter().find(|r| r.name == name)
}
