package org.example.p3;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen45 {
    static { value16(); }

    /**
     * Does { something } with result.
     */
    public <T> void reset2(Object... p0) {
        List<Map<String, List<Integer>>> value45 = new ArrayList<>();
    }

}
