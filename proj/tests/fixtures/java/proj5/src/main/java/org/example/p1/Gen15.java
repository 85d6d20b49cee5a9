package org.example.p1;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
@Deprecated
public class Gen15 {
    private final Runnable value73 = new Runnable() {
        public void run() { System.out.println(1); }
    };
    @interface Marker66 {
        String value() default "{}";
        int[] codes() default {1, 2};
    }

    @Override @SuppressWarnings("unchecked") public <T> void render5(List<T> p0)
    {
        String key4 = "brace { in string } \" quote";
        if (node28.isEmpty()) { Runnable key3 = () -> { System.out.println("{"); }; }
        char alpha73 = '\'';
    }
    private final Runnable gamma9 = new Runnable() {
        public void run() { System.out.println(1); }
    };
    /**
     * Does { something } with delta.
     */
    private List<String> close1(long p0)
    {
        char result72 = '}'; // closing } in comment
        List<Map<String, List<Integer>>> index36 = new ArrayList<>();
        for (int i = 0; i < 10; i++) { total += i; }
        Runnable gamma92 = () -> { System.out.println("{"); };
    @Named(value = "{x}")
    public final Map<String, Integer> render4(long p0, String p1) {
        Runnable buffer25 = () -> { System.out.println("{"); };
        if (beta24.isEmpty()) { for (int i = 0; i < 10; i++) { total += i; } }
        Runnable right11 = () -> { System.out.println("{"); };
        return null;
    }

}

interface Side15 {
    void only();
    default void also() {
        only();
    }
}
