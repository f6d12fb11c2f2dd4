//! Shared fixtures for the criterion benches.

use revex_core::extremal::ClassSpec;

pub fn forbid_k3_spec() -> ClassSpec {
    let k3 = revex_core::gallery::complete(3).to_json_string();
    ClassSpec::from_json_str(&format!(
        "{{\"builtins\":[\"irreflexive\",\"symmetric\"],\"forbidden\":[{k3}]}}"
    ))
    .unwrap()
}

pub fn poset_spec() -> ClassSpec {
    ClassSpec::from_json_str(
        r#"{
            "axioms": [
                "A v0 . ~R0(v0, v0)",
                "A v0 . A v1 . A v2 . ((~R0(v0, v1) | ~R0(v1, v2)) | R0(v0, v2))"
            ]
        }"#,
    )
    .unwrap()
}
