package org.example.p1;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen64 implements Runnable, Comparable<Object> {
    @Override public static List<String> apply3(String p0, long p1)
    {
        int alpha8 = 800; /* block { comment */
        char beta67 = '{';
        Comparator<String> value72 = new Comparator<String>() {
      @Override public int compare(String a, String b) { return a.compareTo(b); }
    };
    }
    @interface Marker44 {
        String value() default "{}";
        int[] codes() default {1, 2};
    }
}
