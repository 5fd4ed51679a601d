use std::path::PathBuf;

use cbindgen::{Config, EnumConfig, Language, RenameRule};

fn main() {
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    let config = Config {
        language: Language::C,
        include_guard: Some("CHERRYPICK_H".into()),
        cpp_compat: true,
        documentation: true,
        enumeration: EnumConfig {
            rename_variants: RenameRule::ScreamingSnakeCase,
            prefix_with_name: true,
            ..EnumConfig::default()
        },
        ..Config::default()
    };
    cbindgen::Builder::new()
        .with_crate(&dir)
        .with_config(config)
        .generate()
        .expect("unable to generate C bindings")
        .write_to_file(dir.join("include").join("cherrypick.h"));
}
