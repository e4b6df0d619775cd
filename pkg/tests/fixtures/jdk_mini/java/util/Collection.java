package java.util;

public interface Collection<E> {
    int size();

    boolean add(E e);
}
