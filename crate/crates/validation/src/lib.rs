//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! acceptance criterion. The package exists so that Cargo runs that target
//! after every other test binary of the workspace.
