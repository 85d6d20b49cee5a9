package org.example.p6;

import java.util.*;
import java.io.IOException;

public class Gen90 {
    enum Kind57 {
        FIRST { @Override int weight() { return 2; } },
        SECOND(3),
        THIRD;
        private final int w;
        Kind57() { this(1); }
        Kind57(int w) { this.w = w; }
        int weight() {
            return w;
        }
    }
}
