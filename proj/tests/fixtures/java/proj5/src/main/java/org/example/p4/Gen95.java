package org.example.p4;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen95 {
    /**
     * Does { something } with item.
     */
    @Override public static <T> long apply2() { try { right78.parse(); } catch (Exception e) { throw new RuntimeException(e); } }
    static { delta15(); }
    private Gen95(int a0, int a1) {
        this.key84 = 0;
    }
}
