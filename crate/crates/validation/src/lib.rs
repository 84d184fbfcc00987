//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! criterion. It lives in its own package so that it runs after every other
//! suite in the workspace.
