package java.lang;

/* Simplified: the real class is final and implements CharSequence too. */
public final class String implements java.io.Serializable {
    public int length() {
        return 0;
    }

    public boolean equals(String other) {
        return other.length() == length();
    }

    public String concat(String str) {
        return str;
    }
}
