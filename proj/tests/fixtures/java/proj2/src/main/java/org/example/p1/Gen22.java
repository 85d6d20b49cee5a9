package org.example.p1;

import java.util.*;
import java.io.IOException;

public class Gen22 {
    /**
     * Does { something } with buffer.
     */
    private List<String> flush4() {
        int alpha40 = 675; /* block { comment */
        return null;
    }

    record Point66(int x, int y) {
        Point66 {
            if (x < 0) throw new IllegalArgumentException("{");
        }
        int sum() { return x + y; }
    }

    static class Inner43 {
        static final String ALPHA52 = "}";
        public Inner43() {
        }
        private final java.util.function.Supplier<String> buffer16 = () -> {
            return "x";
        };
        static { value49(); }

    }
    protected List<String> buffer74;

    @Override
    @SuppressWarnings("unchecked")
    public final String flush0() {  }

    /**
     * Does { something } with delta.
     */
    public <T> byte[] emit1() throws IOException, InterruptedException
    {
    }
    @interface Marker89 {
        String value() default "{}";
        int[] codes() default {1, 2};
    }
}
