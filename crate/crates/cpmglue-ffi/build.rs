use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    let out_dir = PathBuf::from(&crate_dir).join("include");
    if !out_dir.exists() {
        std::fs::create_dir_all(&out_dir).expect("failed to create include directory");
    }
    let header_path = out_dir.join("cpmglue.h");

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_language(cbindgen::Language::C)
        .with_include_guard("CPMGLUE_H")
        .with_cpp_compat(true)
        .with_documentation(true)
        .generate()
        .expect("unable to generate bindings")
        .write_to_file(header_path);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
