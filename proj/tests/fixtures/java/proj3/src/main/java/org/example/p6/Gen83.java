package org.example.p6;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen83 {
    /**
     * Does { something } with value.
     */
    public final int resolve4(long p0) { }
    // plain comment {
    public List<String> store7(String p0, String p1, Object... p2) {
    }
}
