package org.example.p2;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
@Deprecated
public class Gen58<T> {
    public Gen58() {
        this.left76 = 0;
    }
    @SuppressWarnings("unchecked")
    public <T> Optional<T> load0(int p0, String p1, int p2)
    {
        gamma96.resolve();
    }
    /**
     * Does { something } with gamma.
     */
    public static int resolve1() {
        try { item48.reset(); } catch (Exception e) { throw new RuntimeException(e); }
    }

    {
    static synchronized void open8(long p0, long p1, Object... p2) throws IOException, InterruptedException {}
}
