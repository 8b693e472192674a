//! Digit glyph art: three handwriting-style variants per class, 12 rows by
//! 8 columns each. Rendered at 2x into a 28x28 canvas.

pub const N_STYLES: usize = 3;
pub const ART_ROWS: usize = 12;
pub const ART_COLS: usize = 8;

/// `GLYPHS[class * N_STYLES + style]`.
pub const GLYPHS: [[&str; ART_ROWS]; 30] = [
    // 0: round, slashed, boxy
    [
        " ###### ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ###### ",
    ],
    [
        "  ####  ",
        " ##  ## ",
        " ##  ## ",
        "##    ##",
        "##   ###",
        "##  # ##",
        "## #  ##",
        "###   ##",
        "##    ##",
        " ##  ## ",
        " ##  ## ",
        "  ####  ",
    ],
    [
        "########",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "########",
    ],
    // 1: flagged, plain stick, serifed
    [
        "   ##   ",
        "  ###   ",
        " ####   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        " ###### ",
    ],
    [
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
        "   ##   ",
    ],
    [
        "    ##  ",
        "   ###  ",
        "  ####  ",
        " ## ##  ",
        "    ##  ",
        "    ##  ",
        "    ##  ",
        "    ##  ",
        "    ##  ",
        "    ##  ",
        " ###### ",
        " ###### ",
    ],
    // 2: descender, curvy flat-bottom, angular
    [
        " ###### ",
        "##    ##",
        "      ##",
        "      ##",
        "     ## ",
        "    ##  ",
        "   ##   ",
        "  ##    ",
        " ##     ",
        "##      ",
        "##      ",
        "########",
    ],
    [
        "  ####  ",
        " ##  ## ",
        "##    ##",
        "      ##",
        "      ##",
        "     ## ",
        "    ##  ",
        "   ##   ",
        "  ##    ",
        " ##     ",
        "########",
        "########",
    ],
    [
        "########",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        " ###### ",
        "##      ",
        "##      ",
        "##      ",
        "##      ",
        "##      ",
        "########",
    ],
    // 3: double bump, flat top, angular
    [
        " ###### ",
        "##    ##",
        "      ##",
        "      ##",
        "      ##",
        "  ##### ",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "##    ##",
        " ###### ",
    ],
    [
        "########",
        "########",
        "     ## ",
        "    ##  ",
        "   ##   ",
        "  ##### ",
        "      ##",
        "      ##",
        "      ##",
        "##    ##",
        " ##  ## ",
        "  ####  ",
    ],
    [
        "########",
        "      ##",
        "     ## ",
        "    ##  ",
        "   #### ",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "##   ## ",
        " #####  ",
    ],
    // 4: diagonal closed, open-top, bent stem
    [
        "     ## ",
        "    ### ",
        "   #### ",
        "  ## ## ",
        " ##  ## ",
        "##   ## ",
        "##   ## ",
        "########",
        "     ## ",
        "     ## ",
        "     ## ",
        "     ## ",
    ],
    [
        "##      ",
        "##      ",
        "##      ",
        "##   ## ",
        "##   ## ",
        "##   ## ",
        "########",
        "     ## ",
        "     ## ",
        "     ## ",
        "     ## ",
        "     ## ",
    ],
    [
        "  ##    ",
        " ##     ",
        "##      ",
        "##  ##  ",
        "##  ##  ",
        "##  ##  ",
        "########",
        "    ##  ",
        "    ##  ",
        "    ##  ",
        "    ##  ",
        "    ##  ",
    ],
    // 5: classic, tight hook, square hook
    [
        "########",
        "##      ",
        "##      ",
        "##      ",
        "####### ",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "##    ##",
        " ###### ",
    ],
    [
        " #######",
        " ##     ",
        " ##     ",
        " ####   ",
        "    ##  ",
        "     ## ",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        " ##  ## ",
        "  ####  ",
    ],
    [
        "########",
        "##      ",
        "##      ",
        "######  ",
        "##   ## ",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "##   ## ",
        " #####  ",
    ],
    // 6: full loop, long neck, short neck
    [
        " ###### ",
        "##    ##",
        "##      ",
        "##      ",
        "##      ",
        "####### ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ###### ",
    ],
    [
        "    ### ",
        "   ##   ",
        "  ##    ",
        " ##     ",
        " ##     ",
        " #####  ",
        " ##  ## ",
        "##    ##",
        "##    ##",
        "##    ##",
        " ##  ## ",
        "  ####  ",
    ],
    [
        "  ####  ",
        " ##     ",
        "##      ",
        "##      ",
        "######  ",
        "##   ## ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ##  ## ",
        "  ####  ",
    ],
    // 7: plain diagonal, crossbarred, kinked
    [
        "########",
        "      ##",
        "      ##",
        "     ## ",
        "     ## ",
        "    ##  ",
        "    ##  ",
        "   ##   ",
        "   ##   ",
        "  ##    ",
        "  ##    ",
        "  ##    ",
    ],
    [
        "########",
        "      ##",
        "     ## ",
        "     ## ",
        "    ##  ",
        "  ######",
        "    ##  ",
        "   ##   ",
        "   ##   ",
        "  ##    ",
        "  ##    ",
        " ##     ",
    ],
    [
        "########",
        "##    ##",
        "     ## ",
        "     ## ",
        "    ##  ",
        "    ##  ",
        "   ##   ",
        "   ##   ",
        "  ##    ",
        "  ##    ",
        " ##     ",
        " ##     ",
    ],
    // 8: even loops, small top loop, fat waist
    [
        " ###### ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ###### ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ###### ",
    ],
    [
        "  ####  ",
        " ##  ## ",
        " ##  ## ",
        " ##  ## ",
        "  ####  ",
        " ##  ## ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ##  ## ",
        "  ####  ",
    ],
    [
        " ###### ",
        "##    ##",
        "##    ##",
        " ##  ## ",
        "  ####  ",
        " ##  ## ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ###### ",
    ],
    // 9: hooked tail, straight tail, kicked tail
    [
        " ###### ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " #######",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "##    ##",
        " ###### ",
    ],
    [
        "  ####  ",
        " ##  ## ",
        "##    ##",
        "##    ##",
        "##    ##",
        " ##  ###",
        "  ### ##",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
        "      ##",
    ],
    [
        " ###### ",
        "##    ##",
        "##    ##",
        "##    ##",
        "##    ##",
        " ###### ",
        "     ## ",
        "    ##  ",
        "    ##  ",
        "   ##   ",
        "  ##    ",
        " ##     ",
    ],
];
