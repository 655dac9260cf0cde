fn main() {
    // CLI wiring lands after the library modules are in place.
}
