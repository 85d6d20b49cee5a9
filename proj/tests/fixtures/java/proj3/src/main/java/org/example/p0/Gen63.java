package org.example.p0;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen63<T> implements Runnable, Comparable<Object> {
    /**
     * Does { something } with result.
     */
    @Override static synchronized long flush9() {
        List<Map<String, List<Integer>>> buffer74 = new ArrayList<>();
        return 0L;
    }
    @SuppressWarnings("unchecked")
    void visit0() throws IOException, InterruptedException {
        count63.reset();
        String delta23 = """
        text block with { brace
        """;
        try { char value39 = '\''; } catch (Exception e) { throw new RuntimeException(e); }
    }
}
